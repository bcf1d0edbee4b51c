#include "commentrel/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "commentrel/error.hpp"

namespace commentrel {

namespace {

bool is_ascii_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9');
}

char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

constexpr int kVocabularyVersion = 1;
constexpr int kWeightingVersion = 1;

}  // namespace

TokenList tokenize(std::string_view text, const TokenizerConfig& config) {
  TokenList tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    if (!is_ascii_alnum(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && is_ascii_alnum(text[j])) ++j;
    if (j - i >= 2) {
      std::string token(text.substr(i, j - i));
      if (config.lowercase) {
        std::transform(token.begin(), token.end(), token.begin(), ascii_lower);
      }
      if (!config.stopwords.contains(token)) tokens.push_back(std::move(token));
    }
    i = j;
  }
  return tokens;
}

std::vector<TokenList> tokenize_all(const std::vector<std::string>& documents,
                                    const TokenizerConfig& config) {
  std::vector<TokenList> out;
  out.reserve(documents.size());
  for (const auto& doc : documents) out.push_back(tokenize(doc, config));
  return out;
}

Vocabulary::Vocabulary(std::vector<std::string> terms, std::size_t min_df)
    : terms_(std::move(terms)), min_df_(min_df) {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i > 0 && !(terms_[i - 1] < terms_[i])) {
      throw Error(ErrorKind::Format, "vocabulary terms must be sorted and unique");
    }
    index_.emplace(terms_[i], i);
  }
}

std::optional<std::size_t> Vocabulary::index_of(const std::string& term) const {
  const auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vocabulary build_vocabulary(const std::vector<TokenList>& docs,
                            std::size_t min_df) {
  if (docs.empty()) {
    throw Error(ErrorKind::EmptyCorpus, "no documents to build a vocabulary from");
  }
  if (min_df < 1) throw Error(ErrorKind::Usage, "min_df must be >= 1");

  std::map<std::string, std::size_t> df;
  for (const auto& doc : docs) {
    TokenList unique = doc;
    std::sort(unique.begin(), unique.end());
    unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
    for (auto& t : unique) ++df[std::move(t)];
  }
  std::vector<std::string> terms;
  for (auto& [term, count] : df) {
    if (count >= min_df) terms.push_back(term);
  }
  if (terms.empty()) {
    throw Error(ErrorKind::EmptyVocabulary,
                "no term reaches min_df=" + std::to_string(min_df));
  }
  return Vocabulary(std::move(terms), min_df);
}

nlohmann::json vocabulary_to_json(const Vocabulary& vocab) {
  return {{"format", "commentrel.vocabulary"},
          {"version", kVocabularyVersion},
          {"min_df", vocab.min_df()},
          {"terms", vocab.terms()}};
}

Vocabulary vocabulary_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format") != "commentrel.vocabulary" ||
        j.at("version") != kVocabularyVersion) {
      throw Error(ErrorKind::Format, "not a version-1 vocabulary document");
    }
    return Vocabulary(j.at("terms").get<std::vector<std::string>>(),
                      j.at("min_df").get<std::size_t>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Format, std::string("vocabulary: ") + e.what());
  }
}

DocTermMatrix::DocTermMatrix(SparseMatrix counts) : counts_(std::move(counts)) {
  for (std::size_t r = 0; r < counts_.rows(); ++r) {
    for (double v : counts_.row_values(r)) {
      if (!(v >= 1.0) || v != std::floor(v)) {
        throw Error(ErrorKind::Format, "count matrix entries must be positive integers");
      }
    }
  }
}

DocTermMatrix count_matrix(const std::vector<TokenList>& docs,
                           const Vocabulary& vocab) {
  std::vector<SparseMatrix::Triplet> triplets;
  for (std::size_t r = 0; r < docs.size(); ++r) {
    for (const auto& token : docs[r]) {
      if (const auto col = vocab.index_of(token)) {
        triplets.push_back({r, *col, 1.0});
      }
    }
  }
  return DocTermMatrix(
      SparseMatrix::from_triplets(docs.size(), vocab.size(), std::move(triplets)));
}

std::string_view weight_scheme_name(WeightScheme scheme) {
  return scheme == WeightScheme::TfIdf ? "tfidf" : "logentropy";
}

std::optional<WeightScheme> parse_weight_scheme(std::string_view text) {
  if (text == "tfidf") return WeightScheme::TfIdf;
  if (text == "logentropy") return WeightScheme::LogEntropy;
  return std::nullopt;
}

TermWeighting TermWeighting::fit(const DocTermMatrix& m, WeightScheme scheme,
                                 bool normalize) {
  if (m.rows() < 1) throw Error(ErrorKind::EmptyCorpus, "weighting needs >= 1 document");
  TermWeighting w;
  w.scheme_ = scheme;
  w.normalize_ = normalize;
  const auto n = static_cast<double>(m.rows());
  const auto& counts = m.counts();

  if (scheme == WeightScheme::TfIdf) {
    const auto df = counts.column_nnz();
    w.global_.resize(df.size());
    for (std::size_t i = 0; i < df.size(); ++i) {
      w.global_[i] = std::log((1.0 + n) / (1.0 + static_cast<double>(df[i]))) + 1.0;
    }
    return w;
  }

  const auto gf = counts.column_sums();
  // per-term counts summed in sorted order so document order cannot matter
  std::vector<std::vector<double>> tf_by_term(gf.size());
  for (std::size_t r = 0; r < counts.rows(); ++r) {
    const auto idx = counts.row_indices(r);
    const auto val = counts.row_values(r);
    for (std::size_t k = 0; k < idx.size(); ++k) tf_by_term[idx[k]].push_back(val[k]);
  }
  std::vector<double> plogp(gf.size(), 0.0);
  for (std::size_t i = 0; i < gf.size(); ++i) {
    auto& tfs = tf_by_term[i];
    std::sort(tfs.begin(), tfs.end());
    for (double tf : tfs) {
      const double p = tf / gf[i];
      plogp[i] += p * std::log2(p);
    }
  }
  const double denom = std::log2(n + 1.0);
  w.global_.resize(gf.size());
  for (std::size_t i = 0; i < gf.size(); ++i) {
    w.global_[i] = 1.0 + plogp[i] / denom;
  }
  return w;
}

WeightedMatrix TermWeighting::apply(const DocTermMatrix& m) const {
  if (m.cols() != global_.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "weighting fitted on " + std::to_string(global_.size()) +
                    " terms, matrix has " + std::to_string(m.cols()));
  }
  WeightedMatrix out{m.counts(), scheme_, normalize_};
  auto& values = out.values;
  for (std::size_t r = 0; r < values.rows(); ++r) {
    const auto idx = values.row_indices(r);
    auto val = values.row_values(r);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const double local =
          scheme_ == WeightScheme::TfIdf ? val[k] : std::log2(1.0 + val[k]);
      val[k] = local * global_[idx[k]];
    }
    if (normalize_) {
      const double norm = values.row_norm(r);
      if (norm > 0.0) {
        for (double& v : val) v /= norm;
      }
    }
  }
  return out;
}

nlohmann::json TermWeighting::to_json() const {
  return {{"format", "commentrel.weighting"},
          {"version", kWeightingVersion},
          {"scheme", weight_scheme_name(scheme_)},
          {"normalize", normalize_},
          {"global", global_}};
}

TermWeighting TermWeighting::from_json(const nlohmann::json& j) {
  try {
    if (j.at("format") != "commentrel.weighting" ||
        j.at("version") != kWeightingVersion) {
      throw Error(ErrorKind::Format, "not a version-1 weighting document");
    }
    const auto scheme = parse_weight_scheme(j.at("scheme").get<std::string>());
    if (!scheme) throw Error(ErrorKind::Format, "unknown weighting scheme");
    TermWeighting w;
    w.scheme_ = *scheme;
    w.normalize_ = j.at("normalize").get<bool>();
    w.global_ = j.at("global").get<std::vector<double>>();
    return w;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Format, std::string("weighting: ") + e.what());
  }
}

WeightedMatrix weight_tfidf(const DocTermMatrix& m, bool normalize) {
  return TermWeighting::fit(m, WeightScheme::TfIdf, normalize).apply(m);
}

WeightedMatrix weight_logentropy(const DocTermMatrix& m, bool normalize) {
  return TermWeighting::fit(m, WeightScheme::LogEntropy, normalize).apply(m);
}

}  // namespace commentrel
