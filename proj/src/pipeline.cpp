#include "commentrel/pipeline.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commentrel/error.hpp"

namespace commentrel {

namespace {

constexpr int kPipelineVersion = 1;

Hyperparameters with_seed(Hyperparameters hyper, std::uint64_t seed) {
  std::visit([seed](auto& h) { h.seed = seed; }, hyper);
  return hyper;
}

bool hyper_matches(ModelKind kind, const Hyperparameters& hyper) {
  switch (kind) {
    case ModelKind::LogReg: return std::holds_alternative<LogRegHyper>(hyper);
    case ModelKind::LinearSvm: return std::holds_alternative<SvmHyper>(hyper);
    case ModelKind::RandomForest: return std::holds_alternative<ForestHyper>(hyper);
  }
  return false;
}

}  // namespace

Hyperparameters default_hyper(ModelKind kind) {
  switch (kind) {
    case ModelKind::LogReg: return LogRegHyper{};
    case ModelKind::LinearSvm: return SvmHyper{};
    case ModelKind::RandomForest: return ForestHyper{};
  }
  return LogRegHyper{};
}

nlohmann::json run_config_to_json(const RunConfig& config) {
  nlohmann::json j = {
      {"name", config.name},
      {"view", view_mode_name(config.view)},
      {"tokenizer",
       {{"lowercase", config.tokenizer.lowercase},
        {"stopwords", std::vector<std::string>(config.tokenizer.stopwords.begin(),
                                               config.tokenizer.stopwords.end())}}},
      {"min_df", config.min_df},
      {"weighting", weight_scheme_name(config.weighting)},
      {"normalize", config.normalize},
      {"classifier", model_kind_name(config.classifier)},
      {"hyperparameters", hyper_to_json(config.hyper)},
      {"seed", config.seed}};
  if (config.selection) {
    j["selection"] = {{"method", selection_method_name(config.selection->method)},
                      {"k", config.selection->k}};
  } else {
    j["selection"] = nullptr;
  }
  return j;
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  try {
    RunConfig c;
    c.name = j.at("name").get<std::string>();
    const auto view = parse_view_mode(j.at("view").get<std::string>());
    const auto weighting = parse_weight_scheme(j.at("weighting").get<std::string>());
    const auto kind = parse_model_kind(j.at("classifier").get<std::string>());
    if (!view || !weighting || !kind) throw Error(ErrorKind::Format, "bad run config enum");
    c.view = *view;
    c.weighting = *weighting;
    c.classifier = *kind;
    c.tokenizer.lowercase = j.at("tokenizer").at("lowercase").get<bool>();
    for (const auto& s : j.at("tokenizer").at("stopwords")) c.tokenizer.stopwords.insert(s.get<std::string>());
    c.min_df = j.at("min_df").get<std::size_t>();
    c.normalize = j.at("normalize").get<bool>();
    c.seed = j.at("seed").get<std::uint64_t>();
    const auto& hj = j.at("hyperparameters");
    switch (c.classifier) {
      case ModelKind::LogReg: {
        LogRegHyper h;
        h.l2_strength = hj.at("l2_strength").get<double>();
        h.max_iters = hj.at("max_iters").get<int>();
        h.tol = hj.at("tol").get<double>();
        h.seed = hj.at("seed").get<std::uint64_t>();
        c.hyper = h;
        break;
      }
      case ModelKind::LinearSvm: {
        SvmHyper h;
        h.cost_c = hj.at("cost_c").get<double>();
        h.gamma = hj.at("gamma").get<std::string>();
        h.max_iters = hj.at("max_iters").get<std::int64_t>();
        h.tol = hj.at("tol").get<double>();
        h.seed = hj.at("seed").get<std::uint64_t>();
        c.hyper = h;
        break;
      }
      case ModelKind::RandomForest: {
        ForestHyper h;
        h.n_trees = hj.at("n_trees").get<std::size_t>();
        h.min_samples_split = hj.at("min_samples_split").get<std::size_t>();
        h.bootstrap = hj.at("bootstrap").get<bool>();
        h.seed = hj.at("seed").get<std::uint64_t>();
        c.hyper = h;
        break;
      }
    }
    if (!j.at("selection").is_null()) {
      const auto method =
          parse_selection_method(j.at("selection").at("method").get<std::string>());
      if (!method) throw Error(ErrorKind::Format, "bad selection method");
      c.selection = SelectionConfig{*method, j.at("selection").at("k").get<std::size_t>()};
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Format, std::string("run config: ") + e.what());
  }
}

std::string config_hash(const RunConfig& config) {
  const std::string canonical = run_config_to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

FittedPipeline FittedPipeline::fit(const RunConfig& config,
                                   const std::vector<std::string>& documents,
                                   const std::vector<Label>& labels) {
  if (documents.size() != labels.size()) {
    throw Error(ErrorKind::LengthMismatch, "documents and labels differ in length");
  }
  if (!hyper_matches(config.classifier, config.hyper)) {
    throw Error(ErrorKind::Usage, "hyperparameters do not match the classifier kind");
  }
  FittedPipeline p;
  p.config_ = config;
  p.config_.hyper = with_seed(config.hyper, config.seed);

  const auto tokens = tokenize_all(documents, config.tokenizer);
  p.vocab_ = build_vocabulary(tokens, config.min_df);
  const DocTermMatrix counts = count_matrix(tokens, p.vocab_);
  p.weighting_ = TermWeighting::fit(counts, config.weighting, config.normalize);
  const WeightedMatrix weighted = p.weighting_.apply(counts);

  SparseMatrix features = weighted.values;
  if (config.selection) {
    const TermScores scores = config.selection->method == SelectionMethod::ChiSquare
                                  ? chi2_scores(weighted.values, labels)
                                  : mi_scores(counts, labels);
    p.selection_ = select_top_k(scores, p.vocab_, config.selection->k);
    features = project_matrix(weighted.values, *p.selection_);
  }

  switch (config.classifier) {
    case ModelKind::LogReg:
      p.model_ = train_logreg(features, labels, std::get<LogRegHyper>(p.config_.hyper));
      break;
    case ModelKind::LinearSvm:
      p.model_ = train_linear_svm(features, labels, std::get<SvmHyper>(p.config_.hyper));
      break;
    case ModelKind::RandomForest:
      p.model_ = train_random_forest(features, labels, std::get<ForestHyper>(p.config_.hyper));
      break;
  }
  return p;
}

FittedPipeline FittedPipeline::fit(const RunConfig& config, const Corpus& corpus) {
  if (config.view == ViewMode::CodeAndComments && !corpus.has_code()) {
    throw Error(ErrorKind::SchemaMismatch, "code+comments view needs a code column");
  }
  return fit(config, extract_view(corpus, config.view).documents, corpus.labels());
}

SparseMatrix FittedPipeline::transform(const std::vector<std::string>& documents) const {
  const auto tokens = tokenize_all(documents, config_.tokenizer);
  const WeightedMatrix weighted = weighting_.apply(count_matrix(tokens, vocab_));
  if (selection_) return project_matrix(weighted.values, *selection_);
  return weighted.values;
}

std::vector<Label> FittedPipeline::predict(const std::vector<std::string>& documents) const {
  return predict_labels(model_, transform(documents));
}

std::vector<double> FittedPipeline::decision_scores(
    const std::vector<std::string>& documents) const {
  return commentrel::decision_scores(model_, transform(documents));
}

std::vector<Label> FittedPipeline::predict(const Corpus& corpus) const {
  if (config_.view == ViewMode::CodeAndComments && !corpus.has_code()) {
    throw Error(ErrorKind::SchemaMismatch,
                "model was trained on code+comments but the corpus has no code column");
  }
  return predict(extract_view(corpus, config_.view).documents);
}

nlohmann::json FittedPipeline::to_json() const {
  nlohmann::json j = {{"format", "commentrel.pipeline"},
                      {"version", kPipelineVersion},
                      {"config", run_config_to_json(config_)},
                      {"config_hash", config_hash(config_)},
                      {"vocabulary", vocabulary_to_json(vocab_)},
                      {"weighting", weighting_.to_json()},
                      {"model", model_to_json(model_)}};
  j["selection"] = selection_ ? selection_to_json(*selection_) : nlohmann::json(nullptr);
  return j;
}

FittedPipeline FittedPipeline::from_json(const nlohmann::json& j) {
  try {
    if (j.at("format") != "commentrel.pipeline" || j.at("version") != kPipelineVersion) {
      throw Error(ErrorKind::Format, "not a version-1 pipeline document");
    }
    FittedPipeline p;
    p.config_ = run_config_from_json(j.at("config"));
    p.vocab_ = vocabulary_from_json(j.at("vocabulary"));
    p.weighting_ = TermWeighting::from_json(j.at("weighting"));
    if (!j.at("selection").is_null()) p.selection_ = selection_from_json(j.at("selection"));
    p.model_ = model_from_json(j.at("model"));

    const std::size_t width = p.selection_ ? p.selection_->columns.size() : p.vocab_.size();
    if (p.weighting_.global_weights().size() != p.vocab_.size() ||
        p.model_.feature_count != width) {
      throw Error(ErrorKind::SchemaMismatch, "pipeline parts disagree on the feature space");
    }
    if (p.selection_) {
      for (auto c : p.selection_->columns) {
        if (c >= p.vocab_.size()) throw Error(ErrorKind::SchemaMismatch, "selection outside vocabulary");
      }
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Format, std::string("pipeline: ") + e.what());
  }
}

void FittedPipeline::save(const std::string& path) const {
  // temp file, then rename
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + tmp + "'");
    out << to_json().dump(1) << '\n';
    if (!out) throw Error(ErrorKind::Io, "write failed for '" + tmp + "'");
  }
  std::filesystem::rename(tmp, path);
}

FittedPipeline FittedPipeline::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Format, "'" + path + "' is not JSON: " + e.what());
  }
  return from_json(j);
}

}  // namespace commentrel
