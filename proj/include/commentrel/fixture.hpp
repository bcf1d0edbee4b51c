#ifndef COMMENTREL_FIXTURE_HPP
#define COMMENTREL_FIXTURE_HPP

#include <cstddef>
#include <cstdint>

#include "commentrel/corpus.hpp"

namespace commentrel {

// Synthetic comment/code corpus used by tests and as the bundled demo data.
// Useful and not-useful comments draw their content words from disjoint
// pools, so with label_noise = 0 the classes are linearly separable on
// presence features. label_noise flips each label with that probability.
struct FixtureOptions {
  std::size_t size = 200;
  double useful_fraction = 0.5;
  double label_noise = 0.0;
  bool labeled = true;
  std::uint64_t seed = 2022;
};

Corpus make_fixture_corpus(const FixtureOptions& options = {});

}  // namespace commentrel

#endif  // COMMENTREL_FIXTURE_HPP
