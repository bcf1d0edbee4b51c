#include "commentrel/selection.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "commentrel/error.hpp"

namespace commentrel {

namespace {

std::size_t class_index(Label label) { return label == Label::Useful ? 1 : 0; }

std::array<std::size_t, 2> class_counts(std::size_t rows,
                                        const std::vector<Label>& labels) {
  if (labels.size() != rows) {
    throw Error(ErrorKind::DimensionMismatch,
                std::to_string(labels.size()) + " labels for " +
                    std::to_string(rows) + " rows");
  }
  std::array<std::size_t, 2> counts{0, 0};
  for (auto l : labels) ++counts[class_index(l)];
  if (counts[0] == 0 || counts[1] == 0) {
    throw Error(ErrorKind::SingleClassCorpus, "term scoring needs both classes");
  }
  return counts;
}

}  // namespace

std::string_view selection_method_name(SelectionMethod method) {
  return method == SelectionMethod::ChiSquare ? "chi2" : "mi";
}

std::optional<SelectionMethod> parse_selection_method(std::string_view text) {
  if (text == "chi2") return SelectionMethod::ChiSquare;
  if (text == "mi") return SelectionMethod::MutualInformation;
  return std::nullopt;
}

TermScores chi2_scores(const SparseMatrix& m, const std::vector<Label>& labels) {
  const auto n_c = class_counts(m.rows(), labels);
  const double n = static_cast<double>(m.rows());

  // observed[c][i]
  std::array<std::vector<double>, 2> observed{std::vector<double>(m.cols(), 0.0),
                                              std::vector<double>(m.cols(), 0.0)};
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto& obs = observed[class_index(labels[r])];
    const auto idx = m.row_indices(r);
    const auto val = m.row_values(r);
    for (std::size_t k = 0; k < idx.size(); ++k) obs[idx[k]] += val[k];
  }

  TermScores out{SelectionMethod::ChiSquare, std::vector<double>(m.cols(), 0.0)};
  for (std::size_t i = 0; i < m.cols(); ++i) {
    const double total = observed[0][i] + observed[1][i];
    if (total == 0.0) continue;
    double score = 0.0;
    for (std::size_t c = 0; c < 2; ++c) {
      const double expected = total * static_cast<double>(n_c[c]) / n;
      const double diff = observed[c][i] - expected;
      score += diff * diff / expected;
    }
    out.scores[i] = score;
  }
  return out;
}

TermScores mi_scores(const DocTermMatrix& m, const std::vector<Label>& labels) {
  const auto n_c = class_counts(m.rows(), labels);
  const double n = static_cast<double>(m.rows());

  // present[c][i]: documents of class c containing term i
  std::array<std::vector<std::size_t>, 2> present{
      std::vector<std::size_t>(m.cols(), 0), std::vector<std::size_t>(m.cols(), 0)};
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto& pres = present[class_index(labels[r])];
    for (auto col : m.counts().row_indices(r)) ++pres[col];
  }

  TermScores out{SelectionMethod::MutualInformation,
                 std::vector<double>(m.cols(), 0.0)};
  for (std::size_t i = 0; i < m.cols(); ++i) {
    // table[u][c], u = 1 when the term is present
    double table[2][2];
    for (std::size_t c = 0; c < 2; ++c) {
      table[1][c] = static_cast<double>(present[c][i]);
      table[0][c] = static_cast<double>(n_c[c] - present[c][i]);
    }
    // summed pairwise per presence row so a label swap gives identical bits
    double row_terms[2] = {0.0, 0.0};
    for (std::size_t u = 0; u < 2; ++u) {
      const double n_u = table[u][0] + table[u][1];
      double cell[2] = {0.0, 0.0};
      for (std::size_t c = 0; c < 2; ++c) {
        const double n_uc = table[u][c];
        if (n_uc == 0.0) continue;
        cell[c] = (n_uc / n) *
                  std::log2((n * n_uc) / (n_u * static_cast<double>(n_c[c])));
      }
      row_terms[u] = cell[0] + cell[1];
    }
    const double score = row_terms[0] + row_terms[1];
    // rounding can leave a tiny negative for independent terms
    out.scores[i] = std::max(score, 0.0);
  }
  return out;
}

SelectedTerms select_top_k(const TermScores& scores, const Vocabulary& vocab,
                           std::size_t k) {
  if (k < 1) throw Error(ErrorKind::Usage, "k must be >= 1");
  if (scores.scores.size() != vocab.size()) {
    throw Error(ErrorKind::DimensionMismatch, "scores and vocabulary differ in size");
  }
  const auto& terms = vocab.terms();
  std::vector<std::size_t> order(vocab.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto better = [&](std::size_t a, std::size_t b) {
    if (scores.scores[a] != scores.scores[b]) return scores.scores[a] > scores.scores[b];
    return terms[a] < terms[b];
  };
  const std::size_t keep = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep),
                    order.end(), better);
  order.resize(keep);

  SelectedTerms sel;
  sel.method = scores.method;
  sel.k = k;
  sel.columns = order;
  sel.terms.reserve(keep);
  for (auto c : order) sel.terms.push_back(terms[c]);
  return sel;
}

SparseMatrix project_matrix(const SparseMatrix& m, const SelectedTerms& selection) {
  return m.select_columns(selection.columns);
}

nlohmann::json selection_to_json(const SelectedTerms& selection) {
  return {{"format", "commentrel.selection"},
          {"version", 1},
          {"method", selection_method_name(selection.method)},
          {"k", selection.k},
          {"columns", selection.columns},
          {"terms", selection.terms}};
}

SelectedTerms selection_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format") != "commentrel.selection" || j.at("version") != 1) {
      throw Error(ErrorKind::Format, "not a version-1 selection document");
    }
    const auto method = parse_selection_method(j.at("method").get<std::string>());
    if (!method) throw Error(ErrorKind::Format, "unknown selection method");
    SelectedTerms sel;
    sel.method = *method;
    sel.k = j.at("k").get<std::size_t>();
    sel.columns = j.at("columns").get<std::vector<std::size_t>>();
    sel.terms = j.at("terms").get<std::vector<std::string>>();
    if (sel.columns.size() != sel.terms.size()) {
      throw Error(ErrorKind::Format, "selection columns and terms differ in length");
    }
    return sel;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Format, std::string("selection: ") + e.what());
  }
}

}  // namespace commentrel
