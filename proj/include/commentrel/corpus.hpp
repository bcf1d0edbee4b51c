#ifndef COMMENTREL_CORPUS_HPP
#define COMMENTREL_CORPUS_HPP

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace commentrel {

enum class Label { NotUseful = 0, Useful = 1 };

// Accepts "useful", "not useful", "not_useful", "1", "0" ignoring case,
// surrounding whitespace and the width of inner whitespace runs.
std::optional<Label> parse_label(std::string_view text);

// Surface form used in prediction files: "Useful" / "Not Useful".
std::string_view label_name(Label label);

inline Label other_label(Label label) {
  return label == Label::Useful ? Label::NotUseful : Label::Useful;
}

struct LabeledExample {
  std::size_t id = 0;
  std::string comment_text;
  std::string code_text;
  std::optional<Label> label;
};

struct ColumnMapping {
  std::string comment = "comment";
  std::string code = "code";
  std::string label = "label";
};

/// An ordered, non-empty list of examples. When `labeled()` is true every
/// example carries a label. Immutable once built.
class Corpus {
 public:
  Corpus(std::vector<LabeledExample> examples, bool labeled);

  const std::vector<LabeledExample>& examples() const { return examples_; }
  std::size_t size() const { return examples_.size(); }
  bool labeled() const { return labeled_; }
  bool has_code() const { return has_code_; }

  /// Labels in example order; throws UnlabeledCorpus on test corpora.
  std::vector<Label> labels() const;

  /// Sub-corpus with the given example indices, ids preserved.
  Corpus subset(const std::vector<std::size_t>& indices) const;

  // Whether the source file had a code column; a code+comment model needs it.
  void set_has_code(bool has_code) { has_code_ = has_code; }

 private:
  std::vector<LabeledExample> examples_;
  bool labeled_;
  bool has_code_ = true;
};

Corpus load_csv(const std::string& path, const ColumnMapping& schema,
                bool expect_labels);
Corpus parse_corpus_csv(std::string_view text, const ColumnMapping& schema,
                        bool expect_labels);

// Writes comment, code and (when labeled) label columns under `schema` names.
void write_corpus_csv(std::ostream& out, const Corpus& corpus,
                      const ColumnMapping& schema);

enum class ViewMode { CommentsOnly, CodeAndComments };

std::string_view view_mode_name(ViewMode mode);  // "comments" | "code+comments"
std::optional<ViewMode> parse_view_mode(std::string_view text);

struct TextView {
  ViewMode mode;
  std::vector<std::string> documents;
};

/// Comment text alone, or comment, newline, code.
TextView extract_view(const Corpus& corpus, ViewMode mode);

struct CorpusStats {
  std::size_t total = 0;
  std::size_t useful = 0;
  std::size_t not_useful = 0;
  double mean_comment_tokens = 0.0;
};

CorpusStats corpus_stats(const Corpus& corpus);

// Shared prediction contract: header `id,predicted_label`.
struct Prediction {
  std::size_t id;
  Label label;
};

void write_predictions(std::ostream& out, const std::vector<Prediction>& rows);
std::vector<Prediction> read_predictions(const std::string& path);
std::vector<Prediction> parse_predictions(std::string_view text);

}  // namespace commentrel

#endif  // COMMENTREL_CORPUS_HPP
