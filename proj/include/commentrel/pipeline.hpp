#ifndef COMMENTREL_PIPELINE_HPP
#define COMMENTREL_PIPELINE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "commentrel/classifiers.hpp"
#include "commentrel/corpus.hpp"
#include "commentrel/features.hpp"
#include "commentrel/selection.hpp"

namespace commentrel {

struct SelectionConfig {
  SelectionMethod method = SelectionMethod::ChiSquare;
  std::size_t k = 3000;
};

/// One bag-of-words experiment: text view, weighting, optional term
/// selection and a classifier. The run seed overrides the classifier seed.
struct RunConfig {
  std::string name;
  ViewMode view = ViewMode::CommentsOnly;
  TokenizerConfig tokenizer;
  std::size_t min_df = 1;
  WeightScheme weighting = WeightScheme::TfIdf;
  bool normalize = true;
  std::optional<SelectionConfig> selection;
  ModelKind classifier = ModelKind::LogReg;
  Hyperparameters hyper = LogRegHyper{};
  std::uint64_t seed = 0;
};

nlohmann::json run_config_to_json(const RunConfig& config);
RunConfig run_config_from_json(const nlohmann::json& j);

/// 16 hex digits of FNV-1a over the canonical JSON form of the config.
std::string config_hash(const RunConfig& config);

/// Default hyperparameters for a classifier kind.
Hyperparameters default_hyper(ModelKind kind);

/// Everything learned from one training split: vocabulary, weighting
/// statistics, term selection and the classifier. Immutable once fitted.
class FittedPipeline {
 public:
  static FittedPipeline fit(const RunConfig& config,
                            const std::vector<std::string>& documents,
                            const std::vector<Label>& labels);
  static FittedPipeline fit(const RunConfig& config, const Corpus& corpus);

  /// Feature rows for new documents (selected, weighted).
  SparseMatrix transform(const std::vector<std::string>& documents) const;

  std::vector<Label> predict(const std::vector<std::string>& documents) const;
  std::vector<double> decision_scores(const std::vector<std::string>& documents) const;

  /// Predicts on a corpus using the configured view. A code+comments model
  /// applied to a corpus without a code column is a SchemaMismatch.
  std::vector<Label> predict(const Corpus& corpus) const;

  const RunConfig& config() const { return config_; }
  const Vocabulary& vocabulary() const { return vocab_; }
  const TermWeighting& weighting() const { return weighting_; }
  const std::optional<SelectedTerms>& selection() const { return selection_; }
  const TrainedModel& model() const { return model_; }

  nlohmann::json to_json() const;
  static FittedPipeline from_json(const nlohmann::json& j);
  void save(const std::string& path) const;
  static FittedPipeline load(const std::string& path);

 private:
  FittedPipeline() = default;

  RunConfig config_;
  Vocabulary vocab_;
  TermWeighting weighting_;
  std::optional<SelectedTerms> selection_;
  TrainedModel model_;
};

}  // namespace commentrel

#endif  // COMMENTREL_PIPELINE_HPP
