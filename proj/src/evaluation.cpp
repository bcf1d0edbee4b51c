#include "commentrel/evaluation.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "commentrel/csv.hpp"
#include "commentrel/error.hpp"
#include "commentrel/random_forest.hpp"

namespace commentrel {

std::vector<std::size_t> FoldPlan::test_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] == fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] != fold) out.push_back(i);
  }
  return out;
}

FoldPlan stratified_folds(const std::vector<Label>& labels, std::size_t k,
                          std::uint64_t seed) {
  if (k < 2) throw Error(ErrorKind::FoldInfeasible, "k must be >= 2");
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < labels.size(); ++i) {
    by_class[labels[i] == Label::Useful ? 1 : 0].push_back(i);
  }
  for (const auto& members : by_class) {
    if (members.size() < k) {
      throw Error(ErrorKind::FoldInfeasible,
                  "a class has " + std::to_string(members.size()) +
                      " examples, fewer than k=" + std::to_string(k));
    }
  }

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignments.assign(labels.size(), 0);
  std::mt19937_64 rng(seed);
  std::size_t next_fold = 0;
  // Useful first, then NotUseful
  for (auto* members : {&by_class[1], &by_class[0]}) {
    for (std::size_t i = members->size(); i > 1; --i) {
      std::swap((*members)[i - 1], (*members)[forest::uniform_below(rng, i)]);
    }
    for (auto idx : *members) {
      plan.assignments[idx] = next_fold;
      next_fold = (next_fold + 1) % k;
    }
  }
  return plan;
}

double f1_score(double precision, double recall) {
  return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

MetricsReport metrics_from_confusion(const ConfusionCounts& c, Label positive) {
  MetricsReport r;
  r.confusion = c;
  r.positive_class = positive;
  const auto ratio = [](std::size_t num, std::size_t den) {
    return den ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
  };
  r.metrics.accuracy = ratio(c.tp + c.tn, c.total());
  r.metrics.precision = ratio(c.tp, c.tp + c.fp);
  r.metrics.recall = ratio(c.tp, c.tp + c.fn);
  r.metrics.f1 = f1_score(r.metrics.precision, r.metrics.recall);
  return r;
}

MetricsReport compute_metrics(const std::vector<Label>& predicted,
                              const std::vector<Label>& gold, Label positive) {
  if (predicted.size() != gold.size()) {
    throw Error(ErrorKind::LengthMismatch,
                std::to_string(predicted.size()) + " predictions for " +
                    std::to_string(gold.size()) + " gold labels");
  }
  if (gold.empty()) throw Error(ErrorKind::LengthMismatch, "nothing to score");
  ConfusionCounts c;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool pred_pos = predicted[i] == positive;
    const bool gold_pos = gold[i] == positive;
    if (pred_pos && gold_pos) ++c.tp;
    else if (pred_pos) ++c.fp;
    else if (gold_pos) ++c.fn;
    else ++c.tn;
  }
  return metrics_from_confusion(c, positive);
}

CvReport cross_validate_with(const std::vector<Label>& gold, const FoldPlan& plan,
                             const FoldFitPredict& fit_predict) {
  if (plan.assignments.size() != gold.size()) {
    throw Error(ErrorKind::LengthMismatch, "fold plan and labels differ in length");
  }
  CvReport report;
  report.k = plan.k;
  report.seed = plan.seed;
  ConfusionCounts pooled;
  for (std::size_t fold = 0; fold < plan.k; ++fold) {
    const auto train = plan.train_indices(fold);
    const auto test = plan.test_indices(fold);
    const auto predicted = fit_predict(train, test);
    std::vector<Label> fold_gold;
    fold_gold.reserve(test.size());
    for (auto i : test) fold_gold.push_back(gold[i]);
    report.per_fold.push_back(compute_metrics(predicted, fold_gold));
    pooled += report.per_fold.back().confusion;
  }
  const double k = static_cast<double>(plan.k);
  for (const auto& f : report.per_fold) {
    report.macro.accuracy += f.metrics.accuracy;
    report.macro.precision += f.metrics.precision;
    report.macro.recall += f.metrics.recall;
    report.macro.f1 += f.metrics.f1;
  }
  report.macro.accuracy /= k;
  report.macro.precision /= k;
  report.macro.recall /= k;
  report.macro.f1 /= k;
  report.pooled = metrics_from_confusion(pooled);
  return report;
}

CvReport cross_validate(const Corpus& corpus, const RunConfig& config, std::size_t k,
                        std::uint64_t seed, const FoldObserver& observer) {
  const auto gold = corpus.labels();
  const auto plan = stratified_folds(gold, k, seed);
  std::size_t fold = 0;
  auto report = cross_validate_with(
      gold, plan,
      [&](const std::vector<std::size_t>& train, const std::vector<std::size_t>& test) {
        const FittedPipeline pipeline = FittedPipeline::fit(config, corpus.subset(train));
        if (observer) observer(fold, pipeline);
        ++fold;
        return pipeline.predict(corpus.subset(test));
      });
  report.run_name = config.name;
  report.config_hash = config_hash(config);
  return report;
}

std::optional<ReportFormat> parse_report_format(std::string_view text) {
  if (text == "table" || text == "markdown") return ReportFormat::Table;
  if (text == "json") return ReportFormat::Json;
  if (text == "csv") return ReportFormat::Csv;
  return std::nullopt;
}

std::string format_2dp(double value) {
  // the epsilon keeps 0.725 (stored as 0.72499999...) rounding up
  const double rounded = std::floor(value * 100.0 + 0.5 + 1e-9) / 100.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", rounded);
  return buf;
}

namespace {

constexpr int kReportVersion = 1;

nlohmann::json metrics_json(const Metrics& m) {
  return {{"accuracy", m.accuracy}, {"precision", m.precision},
          {"recall", m.recall}, {"f1", m.f1}};
}

Metrics metrics_parse(const nlohmann::json& j) {
  return {j.at("accuracy").get<double>(), j.at("precision").get<double>(),
          j.at("recall").get<double>(), j.at("f1").get<double>()};
}

nlohmann::json report_json(const MetricsReport& r) {
  auto j = metrics_json(r.metrics);
  j["positive_class"] = label_name(r.positive_class);
  j["confusion"] = {{"tp", r.confusion.tp}, {"fp", r.confusion.fp},
                    {"fn", r.confusion.fn}, {"tn", r.confusion.tn}};
  return j;
}

MetricsReport report_parse(const nlohmann::json& j) {
  MetricsReport r;
  r.metrics = metrics_parse(j);
  r.positive_class = j.at("positive_class") == "Useful" ? Label::Useful : Label::NotUseful;
  const auto& c = j.at("confusion");
  r.confusion = {c.at("tp").get<std::size_t>(), c.at("fp").get<std::size_t>(),
                 c.at("fn").get<std::size_t>(), c.at("tn").get<std::size_t>()};
  return r;
}

struct Row {
  std::string name;
  std::string aggregate;
  Metrics metrics;
  std::optional<ConfusionCounts> confusion;
};

std::vector<Row> flatten(const std::vector<NamedReport>& reports) {
  std::vector<Row> rows;
  for (const auto& nr : reports) {
    if (const auto* cv = std::get_if<CvReport>(&nr.report)) {
      rows.push_back({nr.name, "pooled", cv->pooled.metrics, cv->pooled.confusion});
      rows.push_back({nr.name, "macro", cv->macro, std::nullopt});
    } else {
      const auto& m = std::get<MetricsReport>(nr.report);
      rows.push_back({nr.name, "single", m.metrics, m.confusion});
    }
  }
  return rows;
}

std::string full_precision(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

nlohmann::json reports_to_json(const std::vector<NamedReport>& reports) {
  auto list = nlohmann::json::array();
  for (const auto& nr : reports) {
    if (const auto* cv = std::get_if<CvReport>(&nr.report)) {
      auto folds = nlohmann::json::array();
      for (const auto& f : cv->per_fold) folds.push_back(report_json(f));
      list.push_back({{"name", nr.name},
                      {"type", "cv"},
                      {"run", cv->run_name},
                      {"config_hash", cv->config_hash},
                      {"seed", cv->seed},
                      {"k", cv->k},
                      {"per_fold", folds},
                      {"macro", metrics_json(cv->macro)},
                      {"pooled", report_json(cv->pooled)}});
    } else {
      list.push_back({{"name", nr.name},
                      {"type", "metrics"},
                      {"metrics", report_json(std::get<MetricsReport>(nr.report))}});
    }
  }
  return {{"format", "commentrel.report"}, {"version", kReportVersion}, {"reports", list}};
}

std::vector<NamedReport> reports_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format") != "commentrel.report" || j.at("version") != kReportVersion) {
      throw Error(ErrorKind::Format, "not a version-1 report document");
    }
    std::vector<NamedReport> out;
    for (const auto& r : j.at("reports")) {
      const auto name = r.at("name").get<std::string>();
      if (r.at("type") == "cv") {
        CvReport cv;
        cv.run_name = r.at("run").get<std::string>();
        cv.config_hash = r.at("config_hash").get<std::string>();
        cv.seed = r.at("seed").get<std::uint64_t>();
        cv.k = r.at("k").get<std::size_t>();
        for (const auto& f : r.at("per_fold")) cv.per_fold.push_back(report_parse(f));
        cv.macro = metrics_parse(r.at("macro"));
        cv.pooled = report_parse(r.at("pooled"));
        out.push_back({name, cv});
      } else {
        out.push_back({name, report_parse(r.at("metrics"))});
      }
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Format, std::string("report: ") + e.what());
  }
}

std::string render_report(const std::vector<NamedReport>& reports, ReportFormat format) {
  if (reports.empty()) throw Error(ErrorKind::EmptyReport, "no reports to render");
  std::ostringstream out;
  switch (format) {
    case ReportFormat::Json:
      out << reports_to_json(reports).dump(2) << '\n';
      break;
    case ReportFormat::Table:
      out << "| Run | Aggregate | Accuracy | Precision | Recall | F1 |\n"
          << "|---|---|---|---|---|---|\n";
      for (const auto& row : flatten(reports)) {
        out << "| " << row.name << " | " << row.aggregate << " | "
            << format_2dp(row.metrics.accuracy) << " | " << format_2dp(row.metrics.precision)
            << " | " << format_2dp(row.metrics.recall) << " | " << format_2dp(row.metrics.f1)
            << " |\n";
      }
      break;
    case ReportFormat::Csv:
      out << "run,aggregate,accuracy,precision,recall,f1,tp,fp,fn,tn\n";
      for (const auto& row : flatten(reports)) {
        out << csv::escape_field(row.name) << ',' << row.aggregate << ','
            << full_precision(row.metrics.accuracy) << ','
            << full_precision(row.metrics.precision) << ','
            << full_precision(row.metrics.recall) << ',' << full_precision(row.metrics.f1);
        if (row.confusion) {
          out << ',' << row.confusion->tp << ',' << row.confusion->fp << ','
              << row.confusion->fn << ',' << row.confusion->tn;
        } else {
          out << ",,,,";
        }
        out << '\n';
      }
      break;
  }
  return out.str();
}

}  // namespace commentrel
