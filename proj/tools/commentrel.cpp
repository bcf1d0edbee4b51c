// commentrel: train, cross-validate and apply comment relevance classifiers.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commentrel/corpus.hpp"
#include "commentrel/error.hpp"
#include "commentrel/evaluation.hpp"
#include "commentrel/fixture.hpp"
#include "commentrel/pipeline.hpp"
#include "commentrel/registry.hpp"
#include "commentrel/subprocess.hpp"

namespace fs = std::filesystem;
using namespace commentrel;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitMissing = 4;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage:
    case ErrorKind::UnknownRun:
      return kExitUsage;
    case ErrorKind::MissingComponent:
      return kExitMissing;
    default:
      return kExitData;
  }
}

struct RunOptions {
  std::string name;
  std::string train;
  bool cv = false;
  bool fit_full = false;
  std::string out;
  std::optional<std::string> view;
  std::optional<std::string> weighting;
  std::optional<std::string> select;
  std::optional<std::size_t> k_terms;
  std::optional<std::string> classifier;
  std::size_t folds = 10;
  std::optional<std::uint64_t> seed;
  std::string format = "table";
  ColumnMapping columns;
};

struct PredictOptions {
  std::string model;
  std::string test;
  std::string out;
  std::string format = "table";
  ColumnMapping columns;
};

struct ReportOptions {
  std::string predictions;
  std::string gold;
  std::string input;
  std::string out;
  std::string format = "table";
  std::string name = "predictions";
  ColumnMapping columns;
};

struct FixtureCliOptions {
  std::string out;
  FixtureOptions fixture;
  bool unlabeled = false;
};

void add_column_flags(CLI::App* cmd, ColumnMapping& columns) {
  cmd->add_option("--comment-col", columns.comment, "Comment column name")
      ->capture_default_str();
  cmd->add_option("--code-col", columns.code, "Code column name")->capture_default_str();
  cmd->add_option("--label-col", columns.label, "Label column name")
      ->capture_default_str();
}

ReportFormat format_or_throw(const std::string& text) {
  auto f = parse_report_format(text);
  if (!f) throw Error(ErrorKind::Usage, "unknown report format '" + text + "'");
  return *f;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed for '" + path + "'");
}

void emit(const std::string& text, const std::string& out_path) {
  std::cout << text;
  if (!out_path.empty()) write_text(out_path, text);
}

// flags on top of a registry entry (or the defaults when no name is given)
RunConfig resolve_config(const RunOptions& o) {
  RunConfig c;
  if (!o.name.empty()) {
    const auto& entry = find_run(o.name);
    c = std::get<RunConfig>(entry.config);
  } else {
    c.name = "custom";
  }
  if (o.view) {
    auto v = parse_view_mode(*o.view);
    if (!v) throw Error(ErrorKind::Usage, "unknown view '" + *o.view + "'");
    c.view = *v;
  }
  if (o.weighting) {
    auto w = parse_weight_scheme(*o.weighting);
    if (!w) throw Error(ErrorKind::Usage, "unknown weighting '" + *o.weighting + "'");
    c.weighting = *w;
  }
  if (o.select) {
    if (*o.select == "none") {
      c.selection.reset();
    } else {
      auto m = parse_selection_method(*o.select);
      if (!m) throw Error(ErrorKind::Usage, "unknown selection '" + *o.select + "'");
      SelectionConfig s = c.selection.value_or(SelectionConfig{});
      s.method = *m;
      c.selection = s;
    }
  }
  if (o.k_terms) {
    if (*o.k_terms == 0) throw Error(ErrorKind::Usage, "--k-terms must be positive");
    SelectionConfig s = c.selection.value_or(SelectionConfig{});
    s.k = *o.k_terms;
    c.selection = s;
  }
  if (o.classifier) {
    auto k = parse_model_kind(*o.classifier);
    if (!k) throw Error(ErrorKind::Usage, "unknown classifier '" + *o.classifier + "'");
    if (*k != c.classifier) c.hyper = default_hyper(*k);
    c.classifier = *k;
  }
  if (o.seed) c.seed = *o.seed;
  return c;
}

std::string require_component() {
  auto exe = find_finetune_component();
  if (!exe) {
    throw Error(ErrorKind::MissingComponent,
                "transformer runs need the fine-tuning component; set "
                "COMMENTREL_FINETUNE or put commentrel-finetune on PATH");
  }
  return *exe;
}

void check_status(int status, const std::string& what) {
  if (status != 0) {
    throw Error(ErrorKind::MissingComponent,
                what + " exited with status " + std::to_string(status));
  }
}

void component_finetune(const std::string& exe, const TransformerPreset& preset,
                        const std::string& train_csv, const std::string& out_dir) {
  check_status(run_process({exe, "finetune", "--preset", preset.preset, "--train",
                            train_csv, "--out", out_dir}),
               "finetune");
}

std::vector<Prediction> component_predict(const std::string& exe,
                                          const std::string& checkpoint,
                                          const std::string& test_csv,
                                          const std::string& out_csv) {
  check_status(run_process({exe, "predict", "--checkpoint", checkpoint, "--test",
                            test_csv, "--out", out_csv}),
               "predict");
  return read_predictions(out_csv);
}

void write_corpus_file(const std::string& path, const Corpus& corpus,
                       const ColumnMapping& columns) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  write_corpus_csv(out, corpus, columns);
}

std::vector<Label> labels_in_order(const std::vector<Prediction>& preds, std::size_t n) {
  if (preds.size() != n) {
    throw Error(ErrorKind::LengthMismatch, std::to_string(preds.size()) +
                                               " predictions for " + std::to_string(n) +
                                               " examples");
  }
  std::vector<Label> out(n);
  std::vector<bool> seen(n, false);
  for (const auto& p : preds) {
    if (p.id >= n || seen[p.id]) {
      throw Error(ErrorKind::SchemaMismatch, "prediction id " + std::to_string(p.id));
    }
    seen[p.id] = true;
    out[p.id] = p.label;
  }
  return out;
}

class ScratchDir {
 public:
  ScratchDir() {
    std::string tmpl = (fs::temp_directory_path() / "commentrel-XXXXXX").string();
    if (!::mkdtemp(tmpl.data())) throw Error(ErrorKind::Io, "mkdtemp failed");
    path_ = tmpl;
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;
  fs::path operator/(const std::string& leaf) const { return path_ / leaf; }

 private:
  fs::path path_;
};

int run_transformer(const RegistryEntry& entry, const RunOptions& o) {
  const auto& preset = std::get<TransformerPreset>(entry.config);
  const std::string exe = require_component();
  const Corpus corpus = load_csv(o.train, o.columns, true);
  if (!corpus.has_code()) {
    throw Error(ErrorKind::SchemaMismatch, "transformer runs need a code column '" +
                                               o.columns.code + "'");
  }
  if (o.fit_full) {
    component_finetune(exe, preset, o.train, o.out);
    std::cerr << entry.name << ": checkpoint written to " << o.out << "\n";
    return kExitOk;
  }
  const std::uint64_t seed = o.seed.value_or(0);
  const auto gold = corpus.labels();
  const FoldPlan plan = stratified_folds(gold, o.folds, seed);
  ScratchDir scratch;
  std::size_t fold = 0;
  CvReport report = cross_validate_with(
      gold, plan,
      [&](const std::vector<std::size_t>& train, const std::vector<std::size_t>& test) {
        const std::string tag = "fold" + std::to_string(fold++);
        const auto train_csv = (scratch / (tag + "-train.csv")).string();
        const auto test_csv = (scratch / (tag + "-test.csv")).string();
        const auto ckpt = (scratch / (tag + "-ckpt")).string();
        const auto pred_csv = (scratch / (tag + "-pred.csv")).string();
        write_corpus_file(train_csv, corpus.subset(train), o.columns);
        write_corpus_file(test_csv, corpus.subset(test), o.columns);
        component_finetune(exe, preset, train_csv, ckpt);
        return labels_in_order(component_predict(exe, ckpt, test_csv, pred_csv),
                               test.size());
      });
  report.run_name = entry.name;
  report.seed = seed;
  emit(render_report({{entry.name, report}}, format_or_throw(o.format)), o.out);
  return kExitOk;
}

int cmd_run(const RunOptions& o) {
  if (o.cv == o.fit_full) throw Error(ErrorKind::Usage, "choose exactly one of --cv, --fit-full");
  if (o.fit_full && o.out.empty()) throw Error(ErrorKind::Usage, "--fit-full needs --out");
  const ReportFormat format = format_or_throw(o.format);

  if (!o.name.empty()) {
    const auto& entry = find_run(o.name);
    if (std::holds_alternative<TransformerPreset>(entry.config)) {
      return run_transformer(entry, o);
    }
  }
  const RunConfig config = resolve_config(o);
  const Corpus corpus = load_csv(o.train, o.columns, true);

  if (o.fit_full) {
    const auto pipeline = FittedPipeline::fit(config, corpus);
    pipeline.save(o.out);
    std::cerr << config.name << ": model written to " << o.out << " (config "
              << config_hash(config) << ")\n";
    return kExitOk;
  }
  const CvReport report = cross_validate(corpus, config, o.folds, config.seed);
  emit(render_report({{config.name, report}}, format), o.out);
  return kExitOk;
}

// labeled when the label column is present
Corpus load_test_corpus(const std::string& path, const ColumnMapping& columns) {
  try {
    return load_csv(path, columns, true);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::MissingColumn) throw;
  }
  return load_csv(path, columns, false);
}

int cmd_predict(const PredictOptions& o) {
  const ReportFormat format = format_or_throw(o.format);
  const Corpus test = load_test_corpus(o.test, o.columns);

  std::vector<Label> labels;
  if (fs::is_directory(o.model)) {
    const std::string exe = require_component();
    labels = labels_in_order(component_predict(exe, o.model, o.test, o.out), test.size());
  } else {
    const auto pipeline = FittedPipeline::load(o.model);
    labels = pipeline.predict(test);
    std::vector<Prediction> rows;
    rows.reserve(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) {
      rows.push_back({test.examples()[i].id, labels[i]});
    }
    std::ostringstream buf;
    write_predictions(buf, rows);
    write_text(o.out, buf.str());
  }
  std::cerr << labels.size() << " predictions written to " << o.out << "\n";
  if (test.labeled()) {
    const auto metrics = compute_metrics(labels, test.labels());
    std::cout << render_report({{fs::path(o.test).filename().string(), metrics}}, format);
  }
  return kExitOk;
}

int cmd_report(const ReportOptions& o) {
  const ReportFormat format = format_or_throw(o.format);
  std::vector<NamedReport> reports;
  if (!o.input.empty()) {
    if (!o.predictions.empty() || !o.gold.empty()) {
      throw Error(ErrorKind::Usage, "--input excludes --predictions/--gold");
    }
    std::ifstream in(o.input, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + o.input + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::Format, o.input + ": " + e.what());
    }
    reports = reports_from_json(j);
  } else {
    if (o.predictions.empty() || o.gold.empty()) {
      throw Error(ErrorKind::Usage, "report needs --input or both --predictions and --gold");
    }
    const Corpus gold = load_csv(o.gold, o.columns, true);
    const auto preds = labels_in_order(read_predictions(o.predictions), gold.size());
    reports.push_back({o.name, compute_metrics(preds, gold.labels())});
  }
  emit(render_report(reports, format), o.out);
  return kExitOk;
}

int cmd_fixture(const FixtureCliOptions& o) {
  FixtureOptions f = o.fixture;
  f.labeled = !o.unlabeled;
  const Corpus corpus = make_fixture_corpus(f);
  std::ostringstream buf;
  write_corpus_csv(buf, corpus, ColumnMapping{});
  write_text(o.out, buf.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Comment relevance classification: bag-of-words runs, CV and prediction"};
  app.require_subcommand(1);

  auto* runs = app.add_subcommand("runs", "Run registry");
  runs->require_subcommand(1);
  auto* runs_list = runs->add_subcommand("list", "List registered runs");

  RunOptions run_opts;
  auto* run = app.add_subcommand("run", "Cross-validate or fit a run");
  run->add_option("--name", run_opts.name, "Registered run (run1..run5)");
  run->add_option("--train", run_opts.train, "Labeled training CSV")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_flag("--cv", run_opts.cv, "Stratified k-fold cross-validation");
  run->add_flag("--fit-full", run_opts.fit_full, "Train on the whole corpus and save");
  run->add_option("--out", run_opts.out, "Model path (fit-full) or report copy (cv)");
  run->add_option("--view", run_opts.view, "comments | code+comments");
  run->add_option("--weighting", run_opts.weighting, "tfidf | logentropy");
  run->add_option("--select", run_opts.select, "chi2 | mi | none");
  run->add_option("--k-terms", run_opts.k_terms, "Number of selected terms");
  run->add_option("--classifier", run_opts.classifier, "logreg | svm | rf");
  run->add_option("--folds", run_opts.folds, "CV folds")->capture_default_str();
  run->add_option("--seed", run_opts.seed, "Run seed");
  run->add_option("--format", run_opts.format, "table | json | csv")->capture_default_str();
  add_column_flags(run, run_opts.columns);

  PredictOptions pred_opts;
  auto* predict = app.add_subcommand("predict", "Predict labels for a test CSV");
  predict->add_option("--model", pred_opts.model, "Saved model or checkpoint directory")
      ->required()
      ->check(CLI::ExistingPath);
  predict->add_option("--test", pred_opts.test, "Test CSV (labels optional)")
      ->required()
      ->check(CLI::ExistingFile);
  predict->add_option("--out", pred_opts.out, "Prediction CSV")->required();
  predict->add_option("--format", pred_opts.format, "table | json | csv")
      ->capture_default_str();
  add_column_flags(predict, pred_opts.columns);

  ReportOptions report_opts;
  auto* report = app.add_subcommand("report", "Score predictions or re-render reports");
  report->add_option("--predictions", report_opts.predictions, "id,predicted_label CSV");
  report->add_option("--gold", report_opts.gold, "Labeled corpus CSV");
  report->add_option("--input", report_opts.input, "Report JSON");
  report->add_option("--name", report_opts.name, "Row name")->capture_default_str();
  report->add_option("--out", report_opts.out, "Also write the report here");
  report->add_option("--format", report_opts.format, "table | json | csv")
      ->capture_default_str();
  add_column_flags(report, report_opts.columns);

  FixtureCliOptions fixture_opts;
  auto* fixture = app.add_subcommand("fixture", "Write the synthetic fixture corpus");
  fixture->add_option("--out", fixture_opts.out, "Output CSV")->required();
  fixture->add_option("--size", fixture_opts.fixture.size, "Examples")
      ->capture_default_str();
  fixture->add_option("--seed", fixture_opts.fixture.seed, "Generator seed")
      ->capture_default_str();
  fixture->add_option("--noise", fixture_opts.fixture.label_noise, "Label flip rate")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  fixture->add_flag("--unlabeled", fixture_opts.unlabeled, "Omit the label column");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (runs_list->parsed()) {
      std::cout << list_runs();
      return kExitOk;
    }
    if (run->parsed()) return cmd_run(run_opts);
    if (predict->parsed()) return cmd_predict(pred_opts);
    if (report->parsed()) return cmd_report(report_opts);
    if (fixture->parsed()) return cmd_fixture(fixture_opts);
  } catch (const Error& e) {
    std::cerr << "commentrel: " << e.what() << "\n";
    if (e.kind() == ErrorKind::UnknownRun) std::cerr << list_runs();
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "commentrel: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
