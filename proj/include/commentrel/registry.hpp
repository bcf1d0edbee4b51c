#ifndef COMMENTREL_REGISTRY_HPP
#define COMMENTREL_REGISTRY_HPP

#include <string>
#include <variant>
#include <vector>

#include "commentrel/pipeline.hpp"

namespace commentrel {

/// Fine-tuning preset handed to the external transformer component.
struct TransformerPreset {
  std::string preset;    // "albert" | "roberta"
  std::string model_id;  // pretrained checkpoint name
  int epochs = 0;
  int warmup_steps = 500;
  int max_seq_len = 432;
  int batch_size = 4;
  double weight_decay = 0.01;
  ViewMode view = ViewMode::CodeAndComments;
};

struct RegistryEntry {
  std::string name;       // "run1" ... "run5"
  std::string framework;  // e.g. "TF-IDF + RF"
  std::variant<RunConfig, TransformerPreset> config;
};

/// The five submitted runs, in order.
const std::vector<RegistryEntry>& run_registry();

/// Throws UnknownRun, listing the registered names.
const RegistryEntry& find_run(const std::string& name);

/// One line per run with every hyperparameter spelled out.
std::string describe_run(const RegistryEntry& entry);
std::string list_runs();

}  // namespace commentrel

#endif  // COMMENTREL_REGISTRY_HPP
