#include "commentrel/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <ostream>
#include <sstream>

#include "commentrel/csv.hpp"
#include "commentrel/error.hpp"
#include "commentrel/features.hpp"

namespace commentrel {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// lowercase + collapse whitespace runs to one space
std::string normalize_surface(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char c : trim(s)) {
    if (is_space(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

std::optional<std::size_t> find_column(const csv::Row& header,
                                       const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (trim(header[i]) == name) return i;
  }
  return std::nullopt;
}

}  // namespace

std::optional<Label> parse_label(std::string_view text) {
  const std::string s = normalize_surface(text);
  if (s == "useful" || s == "1") return Label::Useful;
  if (s == "not useful" || s == "not_useful" || s == "0") return Label::NotUseful;
  return std::nullopt;
}

std::string_view label_name(Label label) {
  return label == Label::Useful ? "Useful" : "Not Useful";
}

Corpus::Corpus(std::vector<LabeledExample> examples, bool labeled)
    : examples_(std::move(examples)), labeled_(labeled) {
  if (examples_.empty()) throw Error(ErrorKind::EmptyCorpus, "corpus has no examples");
  if (labeled_) {
    for (const auto& ex : examples_) {
      if (!ex.label) {
        throw Error(ErrorKind::UnlabeledCorpus,
                    "example " + std::to_string(ex.id) + " has no label");
      }
    }
  }
}

std::vector<Label> Corpus::labels() const {
  if (!labeled_) throw Error(ErrorKind::UnlabeledCorpus, "corpus carries no labels");
  std::vector<Label> out;
  out.reserve(examples_.size());
  for (const auto& ex : examples_) out.push_back(*ex.label);
  return out;
}

Corpus Corpus::subset(const std::vector<std::size_t>& indices) const {
  std::vector<LabeledExample> picked;
  picked.reserve(indices.size());
  for (auto i : indices) picked.push_back(examples_.at(i));
  Corpus out(std::move(picked), labeled_);
  out.has_code_ = has_code_;
  return out;
}

Corpus parse_corpus_csv(std::string_view text, const ColumnMapping& schema,
                        bool expect_labels) {
  const csv::Table table = csv::parse(text);

  const auto comment_col = find_column(table.header, schema.comment);
  if (!comment_col) {
    throw Error(ErrorKind::MissingColumn, "comment column '" + schema.comment + "'");
  }
  const auto code_col = find_column(table.header, schema.code);
  const auto label_col = find_column(table.header, schema.label);
  if (expect_labels && !label_col) {
    throw Error(ErrorKind::MissingColumn, "label column '" + schema.label + "'");
  }
  if (table.rows.empty()) throw Error(ErrorKind::EmptyCorpus, "header only, no data rows");

  std::vector<LabeledExample> examples;
  examples.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    LabeledExample ex;
    ex.id = r;
    ex.comment_text = row[*comment_col];
    if (trim(ex.comment_text).empty()) {
      throw Error(ErrorKind::MalformedCsv,
                  "row " + std::to_string(r + 1) + ": empty comment");
    }
    if (code_col) ex.code_text = row[*code_col];
    if (expect_labels) {
      ex.label = parse_label(row[*label_col]);
      if (!ex.label) throw UnparsableLabelError(r + 1, row[*label_col]);
    }
    examples.push_back(std::move(ex));
  }
  Corpus corpus(std::move(examples), expect_labels);
  corpus.set_has_code(code_col.has_value());
  return corpus;
}

Corpus load_csv(const std::string& path, const ColumnMapping& schema,
                bool expect_labels) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_corpus_csv(buf.str(), schema, expect_labels);
}

void write_corpus_csv(std::ostream& out, const Corpus& corpus,
                      const ColumnMapping& schema) {
  csv::Row header{schema.comment, schema.code};
  if (corpus.labeled()) header.push_back(schema.label);
  csv::write_row(out, header);
  for (const auto& ex : corpus.examples()) {
    csv::Row row{ex.comment_text, ex.code_text};
    if (corpus.labeled()) row.emplace_back(label_name(*ex.label));
    csv::write_row(out, row);
  }
}

std::string_view view_mode_name(ViewMode mode) {
  return mode == ViewMode::CommentsOnly ? "comments" : "code+comments";
}

std::optional<ViewMode> parse_view_mode(std::string_view text) {
  if (text == "comments") return ViewMode::CommentsOnly;
  if (text == "code+comments") return ViewMode::CodeAndComments;
  return std::nullopt;
}

TextView extract_view(const Corpus& corpus, ViewMode mode) {
  TextView view{mode, {}};
  view.documents.reserve(corpus.size());
  for (const auto& ex : corpus.examples()) {
    if (mode == ViewMode::CommentsOnly) {
      view.documents.push_back(ex.comment_text);
    } else {
      view.documents.push_back(ex.comment_text + "\n" + ex.code_text);
    }
  }
  return view;
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats stats;
  stats.total = corpus.size();
  for (const auto label : corpus.labels()) {
    (label == Label::Useful ? stats.useful : stats.not_useful) += 1;
  }
  std::size_t tokens = 0;
  for (const auto& ex : corpus.examples()) tokens += tokenize(ex.comment_text).size();
  stats.mean_comment_tokens =
      static_cast<double>(tokens) / static_cast<double>(stats.total);
  return stats;
}

void write_predictions(std::ostream& out, const std::vector<Prediction>& rows) {
  out << "id,predicted_label\n";
  for (const auto& p : rows) out << p.id << ',' << label_name(p.label) << '\n';
}

std::vector<Prediction> parse_predictions(std::string_view text) {
  const csv::Table table = csv::parse(text);
  if (table.header != csv::Row{"id", "predicted_label"}) {
    throw Error(ErrorKind::SchemaMismatch,
                "prediction file header must be 'id,predicted_label'");
  }
  std::vector<Prediction> out;
  out.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    Prediction p{};
    try {
      std::size_t used = 0;
      const unsigned long long id = std::stoull(row[0], &used);
      if (used != row[0].size()) throw std::invalid_argument("trailing");
      p.id = static_cast<std::size_t>(id);
    } catch (const std::exception&) {
      throw Error(ErrorKind::SchemaMismatch,
                  "row " + std::to_string(r + 1) + ": bad id '" + row[0] + "'");
    }
    if (row[1] == "Useful") {
      p.label = Label::Useful;
    } else if (row[1] == "Not Useful") {
      p.label = Label::NotUseful;
    } else {
      throw Error(ErrorKind::SchemaMismatch,
                  "row " + std::to_string(r + 1) + ": label '" + row[1] +
                      "' is not 'Useful' or 'Not Useful'");
    }
    out.push_back(p);
  }
  return out;
}

std::vector<Prediction> read_predictions(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_predictions(buf.str());
}

}  // namespace commentrel
