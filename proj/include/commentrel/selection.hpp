#ifndef COMMENTREL_SELECTION_HPP
#define COMMENTREL_SELECTION_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "commentrel/corpus.hpp"
#include "commentrel/features.hpp"
#include "commentrel/sparse_matrix.hpp"

namespace commentrel {

enum class SelectionMethod { ChiSquare, MutualInformation };

std::string_view selection_method_name(SelectionMethod method);  // "chi2" | "mi"
std::optional<SelectionMethod> parse_selection_method(std::string_view text);

struct TermScores {
  SelectionMethod method;
  std::vector<double> scores;  // aligned with vocabulary order
};

/// Class-conditional feature-value totals against the class-prior
/// expectation:
///   O_c = sum over docs of class c of x_ij,  E_c = T_i * N_c / N
///   score_i = sum_c (O_c - E_c)^2 / E_c
/// Works on raw counts or weighted values.
TermScores chi2_scores(const SparseMatrix& m, const std::vector<Label>& labels);

/// Document-presence mutual information in bits between "term occurs" and
/// the class label.
TermScores mi_scores(const DocTermMatrix& m, const std::vector<Label>& labels);

struct SelectedTerms {
  SelectionMethod method = SelectionMethod::ChiSquare;
  std::size_t k = 0;
  std::vector<std::size_t> columns;  // ids in the source vocabulary
  std::vector<std::string> terms;

  bool operator==(const SelectedTerms&) const = default;
};

/// The min(k, |vocab|) best terms, score descending, ties by term ascending.
SelectedTerms select_top_k(const TermScores& scores, const Vocabulary& vocab,
                           std::size_t k);

/// Restricts `m` to the selected columns, in selection order.
SparseMatrix project_matrix(const SparseMatrix& m, const SelectedTerms& selection);

nlohmann::json selection_to_json(const SelectedTerms& selection);
SelectedTerms selection_from_json(const nlohmann::json& j);

}  // namespace commentrel

#endif  // COMMENTREL_SELECTION_HPP
