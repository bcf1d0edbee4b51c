#include "commentrel/registry.hpp"

#include <sstream>

#include "commentrel/error.hpp"

namespace commentrel {

namespace {

constexpr std::size_t kTerms = 3000;
constexpr std::size_t kTrees = 50;

RunConfig bow_run(std::string name, WeightScheme weighting, ModelKind kind,
                  Hyperparameters hyper) {
  RunConfig c;
  c.name = std::move(name);
  c.view = ViewMode::CommentsOnly;
  c.weighting = weighting;
  c.normalize = true;
  c.selection = SelectionConfig{SelectionMethod::ChiSquare, kTerms};
  c.classifier = kind;
  c.hyper = std::move(hyper);
  c.seed = 0;
  return c;
}

std::vector<RegistryEntry> build_registry() {
  ForestHyper forest;
  forest.n_trees = kTrees;
  SvmHyper svm;
  svm.cost_c = 1.0;
  svm.gamma = "scale";

  TransformerPreset albert;
  albert.preset = "albert";
  albert.model_id = "albert-base-v1";
  albert.epochs = 18;
  TransformerPreset roberta;
  roberta.preset = "roberta";
  roberta.model_id = "roberta-base";
  roberta.epochs = 38;

  return {
      {"run1", "TF-IDF + RF",
       bow_run("run1", WeightScheme::TfIdf, ModelKind::RandomForest, forest)},
      {"run2", "Entropy + SVM",
       bow_run("run2", WeightScheme::LogEntropy, ModelKind::LinearSvm, svm)},
      {"run3", "Entropy + RF",
       bow_run("run3", WeightScheme::LogEntropy, ModelKind::RandomForest, forest)},
      {"run4", "ALBERT", albert},
      {"run5", "RoBERTa", roberta},
  };
}

std::string number(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

}  // namespace

const std::vector<RegistryEntry>& run_registry() {
  static const std::vector<RegistryEntry> registry = build_registry();
  return registry;
}

const RegistryEntry& find_run(const std::string& name) {
  for (const auto& entry : run_registry()) {
    if (entry.name == name) return entry;
  }
  std::string known;
  for (const auto& entry : run_registry()) known += (known.empty() ? "" : ", ") + entry.name;
  throw Error(ErrorKind::UnknownRun, "'" + name + "'; registered runs: " + known);
}

std::string describe_run(const RegistryEntry& entry) {
  std::ostringstream out;
  out << entry.name << "  " << entry.framework << "  ";
  if (const auto* c = std::get_if<RunConfig>(&entry.config)) {
    out << "view=" << view_mode_name(c->view)
        << ", weighting=" << weight_scheme_name(c->weighting);
    if (const auto* f = std::get_if<ForestHyper>(&c->hyper)) {
      out << ", classifier=rf, split=information gain, #trees=" << f->n_trees
          << ", max_features=sqrt, bootstrap=" << (f->bootstrap ? "true" : "false");
    } else if (const auto* s = std::get_if<SvmHyper>(&c->hyper)) {
      out << ", classifier=svm, kernel=linear, C=" << number(s->cost_c)
          << ", gamma=" << s->gamma << " (inert for a linear kernel)";
    } else if (const auto* l = std::get_if<LogRegHyper>(&c->hyper)) {
      out << ", classifier=logreg, l2=" << number(l->l2_strength);
    }
    if (c->selection) {
      out << ", #terms=" << c->selection->k << ", "
          << selection_method_name(c->selection->method);
    }
    out << ", seed=" << c->seed;
  } else {
    const auto& t = std::get<TransformerPreset>(entry.config);
    out << "view=" << view_mode_name(t.view) << ", model=" << t.model_id
        << ", epochs=" << t.epochs << ", warmup=" << t.warmup_steps
        << ", max_len=" << t.max_seq_len << ", batch=" << t.batch_size
        << ", weight_decay=" << number(t.weight_decay) << " [transformer component]";
  }
  return out.str();
}

std::string list_runs() {
  std::string out;
  for (const auto& entry : run_registry()) out += describe_run(entry) + "\n";
  return out;
}

}  // namespace commentrel
