#include <cmath>

#include "commentrel/classifiers.hpp"
#include "commentrel/error.hpp"

namespace commentrel {

namespace {

constexpr int kModelVersion = 1;

void check_width(const TrainedModel& model, const SparseMatrix& x) {
  if (x.cols() != model.feature_count) {
    throw Error(ErrorKind::DimensionMismatch,
                "model expects " + std::to_string(model.feature_count) +
                    " features, matrix has " + std::to_string(x.cols()));
  }
}

nlohmann::json tree_to_json(const DecisionTree& tree) {
  nlohmann::json feature = nlohmann::json::array(), threshold = nlohmann::json::array(),
                 left = nlohmann::json::array(), right = nlohmann::json::array(),
                 label = nlohmann::json::array();
  for (const auto& n : tree.nodes) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    label.push_back(n.label == Label::Useful ? 1 : 0);
  }
  return {{"feature", feature}, {"threshold", threshold}, {"left", left},
          {"right", right},     {"label", label}};
}

DecisionTree tree_from_json(const nlohmann::json& j) {
  const auto feature = j.at("feature").get<std::vector<std::int32_t>>();
  const auto threshold = j.at("threshold").get<std::vector<double>>();
  const auto left = j.at("left").get<std::vector<std::int32_t>>();
  const auto right = j.at("right").get<std::vector<std::int32_t>>();
  const auto label = j.at("label").get<std::vector<int>>();
  const std::size_t n = feature.size();
  if (n == 0 || threshold.size() != n || left.size() != n || right.size() != n ||
      label.size() != n) {
    throw Error(ErrorKind::Format, "tree arrays differ in length");
  }
  DecisionTree tree;
  tree.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& node = tree.nodes[i];
    node.feature = feature[i];
    node.threshold = threshold[i];
    node.left = left[i];
    node.right = right[i];
    node.label = label[i] ? Label::Useful : Label::NotUseful;
    if (node.feature >= 0 &&
        (node.left <= static_cast<std::int32_t>(i) || node.right <= static_cast<std::int32_t>(i) ||
         node.left >= static_cast<std::int32_t>(n) || node.right >= static_cast<std::int32_t>(n))) {
      throw Error(ErrorKind::Format, "tree child index out of range");
    }
  }
  return tree;
}

}  // namespace

std::string_view model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::LogReg: return "logreg";
    case ModelKind::LinearSvm: return "svm";
    case ModelKind::RandomForest: return "rf";
  }
  return "unknown";
}

std::optional<ModelKind> parse_model_kind(std::string_view text) {
  if (text == "logreg") return ModelKind::LogReg;
  if (text == "svm") return ModelKind::LinearSvm;
  if (text == "rf") return ModelKind::RandomForest;
  return std::nullopt;
}

std::vector<double> decision_scores(const TrainedModel& model, const SparseMatrix& x) {
  check_width(model, x);
  std::vector<double> scores(x.rows());
  if (const auto* lin = std::get_if<LinearParams>(&model.params)) {
    for (std::size_t r = 0; r < x.rows(); ++r) scores[r] = x.row_dot(r, lin->weights) + lin->bias;
    return scores;
  }
  const auto& trees = std::get<ForestParams>(model.params).trees;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    std::size_t votes = 0;
    for (const auto& tree : trees) votes += tree.predict(x, r) == Label::Useful;
    scores[r] = static_cast<double>(votes) / static_cast<double>(trees.size());
  }
  return scores;
}

std::vector<Label> predict_labels(const TrainedModel& model, const SparseMatrix& x) {
  const auto scores = decision_scores(model, x);
  const double cut = model.kind == ModelKind::RandomForest ? 0.5 : 0.0;
  std::vector<Label> out;
  out.reserve(scores.size());
  for (double s : scores) out.push_back(s > cut ? Label::Useful : Label::NotUseful);
  return out;
}

nlohmann::json hyper_to_json(const Hyperparameters& hyper) {
  return std::visit(
      [](const auto& h) -> nlohmann::json {
        using T = std::decay_t<decltype(h)>;
        if constexpr (std::is_same_v<T, LogRegHyper>) {
          return {{"l2_strength", h.l2_strength}, {"max_iters", h.max_iters},
                  {"tol", h.tol}, {"seed", h.seed}};
        } else if constexpr (std::is_same_v<T, SvmHyper>) {
          return {{"cost_c", h.cost_c}, {"kernel", "linear"}, {"gamma", h.gamma},
                  {"max_iters", h.max_iters}, {"tol", h.tol}, {"seed", h.seed}};
        } else {
          return {{"n_trees", h.n_trees},
                  {"split_measure", "information_gain"},
                  {"max_features", "sqrt"},
                  {"min_samples_split", h.min_samples_split},
                  {"bootstrap", h.bootstrap},
                  {"seed", h.seed}};
        }
      },
      hyper);
}

namespace {

Hyperparameters hyper_from_json(ModelKind kind, const nlohmann::json& j) {
  switch (kind) {
    case ModelKind::LogReg: {
      LogRegHyper h;
      h.l2_strength = j.at("l2_strength").get<double>();
      h.max_iters = j.at("max_iters").get<int>();
      h.tol = j.at("tol").get<double>();
      h.seed = j.at("seed").get<std::uint64_t>();
      return h;
    }
    case ModelKind::LinearSvm: {
      SvmHyper h;
      h.cost_c = j.at("cost_c").get<double>();
      h.gamma = j.at("gamma").get<std::string>();
      h.max_iters = j.at("max_iters").get<std::int64_t>();
      h.tol = j.at("tol").get<double>();
      h.seed = j.at("seed").get<std::uint64_t>();
      return h;
    }
    case ModelKind::RandomForest: {
      ForestHyper h;
      h.n_trees = j.at("n_trees").get<std::size_t>();
      h.min_samples_split = j.at("min_samples_split").get<std::size_t>();
      h.bootstrap = j.at("bootstrap").get<bool>();
      h.seed = j.at("seed").get<std::uint64_t>();
      return h;
    }
  }
  throw Error(ErrorKind::Format, "unknown model kind");
}

}  // namespace

nlohmann::json model_to_json(const TrainedModel& model) {
  nlohmann::json j = {{"format", "commentrel.model"},
                      {"version", kModelVersion},
                      {"kind", model_kind_name(model.kind)},
                      {"positive_class", label_name(model.positive_class)},
                      {"feature_count", model.feature_count},
                      {"hyperparameters", hyper_to_json(model.hyper)},
                      {"training", {{"iterations", model.info.iterations},
                                    {"converged", model.info.converged},
                                    {"final_objective", model.info.final_objective}}}};
  if (const auto* lin = std::get_if<LinearParams>(&model.params)) {
    j["weights"] = lin->weights;
    j["bias"] = lin->bias;
  } else {
    auto trees = nlohmann::json::array();
    for (const auto& t : std::get<ForestParams>(model.params).trees) trees.push_back(tree_to_json(t));
    j["trees"] = std::move(trees);
  }
  return j;
}

TrainedModel model_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format") != "commentrel.model" || j.at("version") != kModelVersion) {
      throw Error(ErrorKind::Format, "not a version-1 model document");
    }
    const auto kind = parse_model_kind(j.at("kind").get<std::string>());
    if (!kind) throw Error(ErrorKind::Format, "unknown model kind");
    TrainedModel model;
    model.kind = *kind;
    model.hyper = hyper_from_json(*kind, j.at("hyperparameters"));
    model.feature_count = j.at("feature_count").get<std::size_t>();
    const auto& tr = j.at("training");
    model.info.iterations = tr.at("iterations").get<std::size_t>();
    model.info.converged = tr.at("converged").get<bool>();
    model.info.final_objective = tr.at("final_objective").get<double>();
    if (*kind == ModelKind::RandomForest) {
      ForestParams params;
      for (const auto& t : j.at("trees")) params.trees.push_back(tree_from_json(t));
      if (params.trees.empty()) throw Error(ErrorKind::Format, "forest without trees");
      model.params = std::move(params);
    } else {
      LinearParams params;
      params.weights = j.at("weights").get<std::vector<double>>();
      params.bias = j.at("bias").get<double>();
      if (params.weights.size() != model.feature_count) {
        throw Error(ErrorKind::Format, "weight vector length differs from feature_count");
      }
      model.params = std::move(params);
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Format, std::string("model: ") + e.what());
  }
}

}  // namespace commentrel
