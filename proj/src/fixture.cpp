#include "commentrel/fixture.hpp"

#include <array>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "commentrel/error.hpp"
#include "commentrel/random_forest.hpp"

namespace commentrel {

namespace {

constexpr std::array kUsefulVerbs = {
    "computes", "validates", "allocates", "releases", "parses",   "converts",
    "initializes", "verifies", "normalizes", "serializes", "acquires", "retries"};
constexpr std::array kUsefulObjects = {
    "checksum", "buffer",  "header", "socket", "descriptor", "mutex",
    "timeout",  "offset",  "packet", "config", "handle",     "payload"};
constexpr std::array kUsefulConditions = {
    "when allocation fails",       "before closing connection",
    "if length exceeds limit",     "so callers can retry",
    "for big endian hosts",        "after validating input",
    "unless caller owns memory",   "while holding lock"};

constexpr std::array kNoiseWords = {
    "increment", "loop",  "declare", "variable", "end",  "print", "temp",
    "todo",      "fixme", "brace",   "tmp",      "stuff", "here", "done",
    "counter",   "call",  "zero",    "ok"};

constexpr std::array kCodeLines = {
    "free(p);",
    "len = strlen(buf);",
    "for (i = 0; i < n; i++) sum += a[i];",
    "if (fd < 0) return -1;",
    "x++;",
    "memcpy(dst, src, n);",
    "pthread_mutex_lock(&m);",
    "crc = crc32(crc, data, size);",
    "p = malloc(sizeof(*p));",
    "printf(\"%d\\n\", v);"};

template <typename Array>
const char* pick(std::mt19937_64& rng, const Array& pool) {
  return pool[forest::uniform_below(rng, pool.size())];
}

std::string useful_comment(std::mt19937_64& rng) {
  std::string text = pick(rng, kUsefulVerbs);
  text += " the ";
  text += pick(rng, kUsefulObjects);
  if (forest::uniform_below(rng, 2) == 0) {
    text += " and ";
    text += pick(rng, kUsefulVerbs);
    text += " the ";
    text += pick(rng, kUsefulObjects);
  }
  text += " ";
  text += pick(rng, kUsefulConditions);
  return text;
}

std::string noise_comment(std::mt19937_64& rng) {
  const std::size_t words = 1 + forest::uniform_below(rng, 3);
  std::string text;
  for (std::size_t w = 0; w < words; ++w) {
    if (w) text += ' ';
    text += pick(rng, kNoiseWords);
  }
  if (forest::uniform_below(rng, 4) == 0) text = "/* " + text + " */";
  return text;
}

double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

Corpus make_fixture_corpus(const FixtureOptions& options) {
  if (options.size == 0) throw Error(ErrorKind::EmptyCorpus, "fixture size 0");
  std::mt19937_64 rng(options.seed);
  const auto n_useful = static_cast<std::size_t>(
      std::llround(options.useful_fraction * static_cast<double>(options.size)));

  std::vector<Label> truth(options.size, Label::NotUseful);
  for (std::size_t i = 0; i < n_useful && i < truth.size(); ++i) truth[i] = Label::Useful;
  for (std::size_t i = truth.size(); i > 1; --i) {
    std::swap(truth[i - 1], truth[forest::uniform_below(rng, i)]);
  }

  std::vector<LabeledExample> examples;
  examples.reserve(options.size);
  for (std::size_t i = 0; i < options.size; ++i) {
    LabeledExample ex;
    ex.id = i;
    ex.comment_text =
        truth[i] == Label::Useful ? useful_comment(rng) : noise_comment(rng);
    const std::size_t lines = 1 + forest::uniform_below(rng, 2);
    for (std::size_t l = 0; l < lines; ++l) {
      if (l) ex.code_text += '\n';
      ex.code_text += pick(rng, kCodeLines);
    }
    Label label = truth[i];
    if (options.label_noise > 0.0 && unit(rng) < options.label_noise) {
      label = other_label(label);
    }
    if (options.labeled) ex.label = label;
    examples.push_back(std::move(ex));
  }
  return Corpus(std::move(examples), options.labeled);
}

}  // namespace commentrel
