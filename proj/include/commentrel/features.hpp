#ifndef COMMENTREL_FEATURES_HPP
#define COMMENTREL_FEATURES_HPP

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "commentrel/sparse_matrix.hpp"

namespace commentrel {

// Tokens are maximal runs of ASCII letters/digits of length >= 2. Anything
// else, including non-ASCII bytes, is a delimiter.
struct TokenizerConfig {
  bool lowercase = true;
  std::set<std::string> stopwords;
};

using TokenList = std::vector<std::string>;

TokenList tokenize(std::string_view text, const TokenizerConfig& config = {});
std::vector<TokenList> tokenize_all(const std::vector<std::string>& documents,
                                    const TokenizerConfig& config = {});

/// Sorted term list with its inverse index.
class Vocabulary {
 public:
  Vocabulary() = default;
  /// `terms` must be sorted and unique.
  Vocabulary(std::vector<std::string> terms, std::size_t min_df);

  const std::vector<std::string>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  std::size_t min_df() const { return min_df_; }
  std::optional<std::size_t> index_of(const std::string& term) const;

  bool operator==(const Vocabulary& other) const {
    return terms_ == other.terms_ && min_df_ == other.min_df_;
  }

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t min_df_ = 1;
};

/// Every token whose document frequency is >= min_df. Throws
/// EmptyVocabulary when nothing survives.
Vocabulary build_vocabulary(const std::vector<TokenList>& docs,
                            std::size_t min_df = 1);

nlohmann::json vocabulary_to_json(const Vocabulary& vocab);
Vocabulary vocabulary_from_json(const nlohmann::json& j);

/// Raw term counts; every stored entry is a positive integer.
class DocTermMatrix {
 public:
  DocTermMatrix() = default;
  explicit DocTermMatrix(SparseMatrix counts);

  const SparseMatrix& counts() const { return counts_; }
  std::size_t rows() const { return counts_.rows(); }
  std::size_t cols() const { return counts_.cols(); }

 private:
  SparseMatrix counts_;
};

/// Out-of-vocabulary tokens are ignored.
DocTermMatrix count_matrix(const std::vector<TokenList>& docs,
                           const Vocabulary& vocab);

enum class WeightScheme { TfIdf, LogEntropy };

std::string_view weight_scheme_name(WeightScheme scheme);  // "tfidf" | "logentropy"
std::optional<WeightScheme> parse_weight_scheme(std::string_view text);

struct WeightedMatrix {
  SparseMatrix values;
  WeightScheme scheme = WeightScheme::TfIdf;
  bool row_normalized = false;
};

/// Per-term global statistics fitted on one count matrix (the training
/// split) and applied unchanged to any other matrix over the same vocabulary.
///
///   tfidf:      w = tf * global,  global = ln((1 + N) / (1 + df)) + 1
///   logentropy: w = log2(1 + tf) * global,
///               global = 1 + sum_j p_j log2 p_j / log2(N + 1),  p_j = tf_j / gf
class TermWeighting {
 public:
  static TermWeighting fit(const DocTermMatrix& m, WeightScheme scheme,
                           bool normalize);

  WeightedMatrix apply(const DocTermMatrix& m) const;

  WeightScheme scheme() const { return scheme_; }
  bool normalize() const { return normalize_; }
  const std::vector<double>& global_weights() const { return global_; }

  nlohmann::json to_json() const;
  static TermWeighting from_json(const nlohmann::json& j);

  bool operator==(const TermWeighting&) const = default;

 private:
  WeightScheme scheme_ = WeightScheme::TfIdf;
  bool normalize_ = true;
  std::vector<double> global_;
};

WeightedMatrix weight_tfidf(const DocTermMatrix& m, bool normalize);
WeightedMatrix weight_logentropy(const DocTermMatrix& m, bool normalize);

}  // namespace commentrel

#endif  // COMMENTREL_FEATURES_HPP
