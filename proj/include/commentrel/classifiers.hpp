#ifndef COMMENTREL_CLASSIFIERS_HPP
#define COMMENTREL_CLASSIFIERS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "commentrel/corpus.hpp"
#include "commentrel/sparse_matrix.hpp"

namespace commentrel {

enum class ModelKind { LogReg, LinearSvm, RandomForest };

std::string_view model_kind_name(ModelKind kind);  // "logreg" | "svm" | "rf"
std::optional<ModelKind> parse_model_kind(std::string_view text);

struct LogRegHyper {
  double l2_strength = 1.0;
  int max_iters = 1000;
  double tol = 1e-6;
  std::uint64_t seed = 0;
};

struct SvmHyper {
  double cost_c = 1.0;
  // 0 selects max(10'000'000, 100 * rows)
  std::int64_t max_iters = 0;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  // Carried for the record only; a linear kernel has no gamma.
  std::string gamma = "scale";
};

struct ForestHyper {
  std::size_t n_trees = 50;
  std::size_t min_samples_split = 2;
  bool bootstrap = true;
  std::uint64_t seed = 0;
  // 0 uses the hardware concurrency; results do not depend on it
  unsigned threads = 0;
};

using Hyperparameters = std::variant<LogRegHyper, SvmHyper, ForestHyper>;

struct LinearParams {
  std::vector<double> weights;
  double bias = 0.0;
};

struct TreeNode {
  // leaf when feature < 0; rows with x[feature] <= threshold go left
  std::int32_t feature = -1;
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  Label label = Label::NotUseful;
  double gain = 0.0;
  double weight = 0.0;  // bootstrap-weighted sample count at the node
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  Label predict(const SparseMatrix& x, std::size_t row) const;
  std::size_t leaf_count() const;
  std::size_t depth() const;
};

struct ForestParams {
  std::vector<DecisionTree> trees;
};

struct TrainInfo {
  std::size_t iterations = 0;
  bool converged = true;
  double final_objective = 0.0;
  // objective per accepted iteration (linear models); not serialized
  std::vector<double> objective_history;
};

/// A fitted classifier. Useful is the positive class: linear models score
/// w.x + b (> 0 means Useful), forests score the fraction of Useful votes
/// (> 0.5 means Useful, an even split goes to NotUseful).
struct TrainedModel {
  ModelKind kind = ModelKind::LogReg;
  Hyperparameters hyper;
  Label positive_class = Label::Useful;
  std::size_t feature_count = 0;
  std::variant<LinearParams, ForestParams> params;
  TrainInfo info;
};

// L2-regularized logistic loss with an unpenalized bias:
//   0.5 * l2 * |w|^2 + sum_j log(1 + exp(-y_j (w.x_j + b))),  y in {-1, +1}
double logreg_objective(const SparseMatrix& x, std::span<const double> y,
                        std::span<const double> w, double b, double l2);
// Fills grad_w (size cols) and returns d/db.
double logreg_gradient(const SparseMatrix& x, std::span<const double> y,
                       std::span<const double> w, double b, double l2,
                       std::span<double> grad_w);

// 0.5 * |w|^2 + C * sum_j max(0, 1 - y_j (w.x_j + b))
double svm_primal_objective(const SparseMatrix& x, std::span<const double> y,
                            std::span<const double> w, double b, double cost_c);

/// +1 for Useful, -1 for NotUseful.
std::vector<double> signed_targets(const std::vector<Label>& labels);

TrainedModel train_logreg(const SparseMatrix& x, const std::vector<Label>& y,
                          const LogRegHyper& h = {});
TrainedModel train_linear_svm(const SparseMatrix& x, const std::vector<Label>& y,
                              const SvmHyper& h = {});
TrainedModel train_random_forest(const SparseMatrix& x, const std::vector<Label>& y,
                                 const ForestHyper& h = {});

std::vector<double> decision_scores(const TrainedModel& model, const SparseMatrix& x);
std::vector<Label> predict_labels(const TrainedModel& model, const SparseMatrix& x);

nlohmann::json model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const nlohmann::json& j);

nlohmann::json hyper_to_json(const Hyperparameters& hyper);

}  // namespace commentrel

#endif  // COMMENTREL_CLASSIFIERS_HPP
