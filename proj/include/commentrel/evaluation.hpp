#ifndef COMMENTREL_EVALUATION_HPP
#define COMMENTREL_EVALUATION_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "commentrel/corpus.hpp"
#include "commentrel/pipeline.hpp"

namespace commentrel {

/// Fold id per example. Within each class, fold sizes differ by at most one.
struct FoldPlan {
  std::size_t k = 10;
  std::uint64_t seed = 0;
  std::vector<std::size_t> assignments;

  std::vector<std::size_t> test_indices(std::size_t fold) const;
  std::vector<std::size_t> train_indices(std::size_t fold) const;
};

/// Each class is shuffled with the seed and dealt round-robin; the second
/// class continues from the fold where the first stopped so fold totals stay
/// balanced too. Throws FoldInfeasible when k < 2 or a class has < k members.
FoldPlan stratified_folds(const std::vector<Label>& labels, std::size_t k,
                          std::uint64_t seed);

struct ConfusionCounts {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  ConfusionCounts& operator+=(const ConfusionCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
    return *this;
  }
  bool operator==(const ConfusionCounts&) const = default;
};

struct Metrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct MetricsReport {
  Metrics metrics;
  ConfusionCounts confusion;
  Label positive_class = Label::Useful;
};

/// Harmonic mean, 0 when p + r = 0.
double f1_score(double precision, double recall);

MetricsReport metrics_from_confusion(const ConfusionCounts& c,
                                     Label positive = Label::Useful);
MetricsReport compute_metrics(const std::vector<Label>& predicted,
                              const std::vector<Label>& gold,
                              Label positive = Label::Useful);

struct CvReport {
  std::string run_name;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::size_t k = 0;
  std::vector<MetricsReport> per_fold;
  Metrics macro;          // mean of the per-fold metrics
  MetricsReport pooled;   // metrics of the concatenated fold predictions
};

/// Trains on `train` rows and returns predictions for `test` rows, in order.
using FoldFitPredict = std::function<std::vector<Label>(
    const std::vector<std::size_t>& train, const std::vector<std::size_t>& test)>;

CvReport cross_validate_with(const std::vector<Label>& gold, const FoldPlan& plan,
                             const FoldFitPredict& fit_predict);

/// Called with each fold's pipeline, fitted on the training split only.
using FoldObserver = std::function<void(std::size_t fold, const FittedPipeline&)>;

CvReport cross_validate(const Corpus& corpus, const RunConfig& config, std::size_t k,
                        std::uint64_t seed, const FoldObserver& observer = {});

enum class ReportFormat { Table, Json, Csv };

std::optional<ReportFormat> parse_report_format(std::string_view text);

struct NamedReport {
  std::string name;
  std::variant<CvReport, MetricsReport> report;
};

/// Table mode prints a markdown table with metrics rounded half-up to two
/// decimals (one row per metrics report, pooled and macro rows per CV
/// report). JSON and CSV keep full precision. Throws EmptyReport.
std::string render_report(const std::vector<NamedReport>& reports, ReportFormat format);

/// Half-up rounding to two decimals, as text ("0.72").
std::string format_2dp(double value);

nlohmann::json reports_to_json(const std::vector<NamedReport>& reports);
std::vector<NamedReport> reports_from_json(const nlohmann::json& j);

}  // namespace commentrel

#endif  // COMMENTREL_EVALUATION_HPP
