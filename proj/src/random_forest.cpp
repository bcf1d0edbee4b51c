#include "commentrel/random_forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "commentrel/classifiers.hpp"
#include "commentrel/error.hpp"
#include "training_checks.hpp"

namespace commentrel {

namespace forest {

FeatureColumns::FeatureColumns(const SparseMatrix& x)
    : rows_(x.rows()), col_ptr_(x.cols() + 1, 0) {
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (auto c : x.row_indices(r)) ++col_ptr_[c + 1];
  }
  for (std::size_t c = 0; c < x.cols(); ++c) col_ptr_[c + 1] += col_ptr_[c];
  row_idx_.resize(x.nnz());
  values_.resize(x.nnz());
  std::vector<std::size_t> fill(col_ptr_.begin(), col_ptr_.end() - 1);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto idx = x.row_indices(r);
    const auto val = x.row_values(r);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const std::size_t pos = fill[idx[k]]++;
      row_idx_[pos] = static_cast<std::uint32_t>(r);
      values_[pos] = val[k];
    }
  }
}

double entropy(double not_useful, double useful) {
  const double total = not_useful + useful;
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double part : {not_useful, useful}) {
    if (part > 0.0) {
      const double p = part / total;
      h -= p * std::log2(p);
    }
  }
  return h;
}

namespace {

struct ValueGroup {
  double value;
  double w[2];  // weight by class index (0 = NotUseful, 1 = Useful)
};

std::size_t cls(Label l) { return l == Label::Useful ? 1 : 0; }

void node_totals(const NodeSamples& node, double totals[2]) {
  totals[0] = totals[1] = 0.0;
  for (auto r : node.rows) totals[cls(node.labels[r])] += node.weight[r];
}

double children_gain(const double totals[2], const double left[2]) {
  const double right0 = totals[0] - left[0];
  const double right1 = totals[1] - left[1];
  const double w = totals[0] + totals[1];
  const double wl = left[0] + left[1];
  const double wr = right0 + right1;
  return entropy(totals[0], totals[1]) -
         (wl * entropy(left[0], left[1]) + wr * entropy(right0, right1)) / w;
}

}  // namespace

Split best_split(const FeatureColumns& columns, const NodeSamples& node,
                 std::span<const std::size_t> candidates) {
  double totals[2];
  node_totals(node, totals);

  Split best;
  std::vector<ValueGroup> groups;
  for (const std::size_t f : candidates) {
    groups.clear();
    double nz[2] = {0.0, 0.0};
    const auto rows = columns.rows_of(f);
    const auto vals = columns.values_of(f);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const auto r = rows[k];
      if (node.member[r] != node.node || node.weight[r] <= 0.0) continue;
      ValueGroup g{vals[k], {0.0, 0.0}};
      g.w[cls(node.labels[r])] = node.weight[r];
      nz[cls(node.labels[r])] += node.weight[r];
      groups.push_back(g);
    }
    const double zero0 = totals[0] - nz[0];
    const double zero1 = totals[1] - nz[1];
    if (zero0 + zero1 > 0.0) groups.push_back({0.0, {zero0, zero1}});
    if (groups.size() < 2) continue;

    std::sort(groups.begin(), groups.end(),
              [](const ValueGroup& a, const ValueGroup& b) { return a.value < b.value; });
    double left[2] = {0.0, 0.0};
    for (std::size_t k = 0; k + 1 < groups.size(); ++k) {
      left[0] += groups[k].w[0];
      left[1] += groups[k].w[1];
      const double lo = groups[k].value;
      const double hi = groups[k + 1].value;
      if (lo == hi) continue;
      double threshold = lo + (hi - lo) / 2.0;
      if (!(threshold < hi)) threshold = lo;
      const double gain = children_gain(totals, left);
      if (gain > best.gain) {
        best.feature = static_cast<std::int32_t>(f);
        best.threshold = threshold;
        best.gain = gain;
      }
    }
  }
  return best;
}

double split_gain(const FeatureColumns& columns, const NodeSamples& node,
                  std::size_t feature, double threshold) {
  double totals[2];
  node_totals(node, totals);
  const auto rows = columns.rows_of(feature);
  const auto vals = columns.values_of(feature);
  double left[2] = {0.0, 0.0};
  for (auto r : node.rows) {
    const auto it = std::lower_bound(rows.begin(), rows.end(), r);
    const double v = (it != rows.end() && *it == r)
                         ? vals[static_cast<std::size_t>(it - rows.begin())]
                         : 0.0;
    if (v <= threshold) left[cls(node.labels[r])] += node.weight[r];
  }
  return children_gain(totals, left);
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  // rejection sampling keeps the draw unbiased
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % bound;
}

}  // namespace forest

namespace {

Label majority(const double w[2]) {
  return w[1] > w[0] ? Label::Useful : Label::NotUseful;
}

DecisionTree grow_tree(const forest::FeatureColumns& columns,
                       const std::vector<Label>& labels, const ForestHyper& h,
                       std::uint64_t tree_seed) {
  const std::size_t n = columns.rows();
  const std::size_t d = columns.cols();
  const std::size_t n_candidates =
      std::min(d, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d)))));

  std::mt19937_64 rng(tree_seed);
  std::vector<double> weight(n, h.bootstrap ? 0.0 : 1.0);
  if (h.bootstrap) {
    for (std::size_t k = 0; k < n; ++k) weight[forest::uniform_below(rng, n)] += 1.0;
  }
  std::vector<std::int32_t> member(n, -1);
  std::vector<std::uint32_t> root_rows;
  for (std::size_t r = 0; r < n; ++r) {
    if (weight[r] > 0.0) {
      member[r] = 0;
      root_rows.push_back(static_cast<std::uint32_t>(r));
    }
  }

  std::vector<std::size_t> perm(d);
  for (std::size_t f = 0; f < d; ++f) perm[f] = f;

  DecisionTree tree;
  tree.nodes.emplace_back();
  struct Pending {
    std::int32_t node;
    std::vector<std::uint32_t> rows;
  };
  std::vector<Pending> stack;
  stack.push_back({0, std::move(root_rows)});

  while (!stack.empty()) {
    Pending cur = std::move(stack.back());
    stack.pop_back();

    double w[2] = {0.0, 0.0};
    for (auto r : cur.rows) w[labels[r] == Label::Useful ? 1 : 0] += weight[r];
    auto& node = tree.nodes[static_cast<std::size_t>(cur.node)];
    node.weight = w[0] + w[1];
    node.label = majority(w);
    if (w[0] == 0.0 || w[1] == 0.0 ||
        node.weight < static_cast<double>(h.min_samples_split)) {
      continue;
    }

    forest::NodeSamples samples{cur.rows, member, cur.node, weight, labels};
    // partial Fisher-Yates over a per-tree permutation; drawing continues past
    // the sqrt(d) budget only while no candidate gives a usable split
    std::size_t drawn = 0;
    auto draw = [&](std::size_t count) {
      const std::size_t start = drawn;
      for (; drawn < std::min(d, start + count); ++drawn) {
        const std::size_t pick = drawn + forest::uniform_below(rng, d - drawn);
        std::swap(perm[drawn], perm[pick]);
      }
      return std::span<const std::size_t>(perm.data() + start, drawn - start);
    };
    forest::Split split = forest::best_split(columns, samples, draw(n_candidates));
    while (!split.valid() && drawn < d) {
      split = forest::best_split(columns, samples, draw(1));
    }
    if (!split.valid()) continue;

    const auto left_id = static_cast<std::int32_t>(tree.nodes.size());
    const auto right_id = left_id + 1;
    const bool zero_left = 0.0 <= split.threshold;
    const std::int32_t zero_side = zero_left ? left_id : right_id;
    for (auto r : cur.rows) member[r] = zero_side;
    const auto f = static_cast<std::size_t>(split.feature);
    const auto col_rows = columns.rows_of(f);
    const auto col_vals = columns.values_of(f);
    for (std::size_t k = 0; k < col_rows.size(); ++k) {
      const auto r = col_rows[k];
      if (member[r] == zero_side) {
        member[r] = col_vals[k] <= split.threshold ? left_id : right_id;
      }
    }
    std::vector<std::uint32_t> left_rows, right_rows;
    for (auto r : cur.rows) (member[r] == left_id ? left_rows : right_rows).push_back(r);

    {
      auto& parent = tree.nodes[static_cast<std::size_t>(cur.node)];
      parent.feature = split.feature;
      parent.threshold = split.threshold;
      parent.gain = split.gain;
      parent.left = left_id;
      parent.right = right_id;
    }
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    stack.push_back({right_id, std::move(right_rows)});
    stack.push_back({left_id, std::move(left_rows)});
  }
  return tree;
}

}  // namespace

Label DecisionTree::predict(const SparseMatrix& x, std::size_t row) const {
  std::size_t at = 0;
  while (nodes[at].feature >= 0) {
    const auto& node = nodes[at];
    const double v = x.at(row, static_cast<std::size_t>(node.feature));
    at = static_cast<std::size_t>(v <= node.threshold ? node.left : node.right);
  }
  return nodes[at].label;
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.feature < 0; }));
}

std::size_t DecisionTree::depth() const {
  std::vector<std::size_t> level(nodes.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, level[i]);
    if (nodes[i].feature >= 0) {
      level[static_cast<std::size_t>(nodes[i].left)] = level[i] + 1;
      level[static_cast<std::size_t>(nodes[i].right)] = level[i] + 1;
    }
  }
  return deepest;
}

TrainedModel train_random_forest(const SparseMatrix& x, const std::vector<Label>& labels,
                                 const ForestHyper& h) {
  detail::check_training_input(x, labels);
  if (h.n_trees < 1) throw Error(ErrorKind::Usage, "n_trees must be >= 1");

  const forest::FeatureColumns columns(x);
  ForestParams params;
  params.trees.resize(h.n_trees);

  unsigned threads = h.threads ? h.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, h.n_trees));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < h.n_trees; t = next++) {
      params.trees[t] = grow_tree(columns, labels, h, h.seed + t);
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }

  TrainedModel model;
  model.kind = ModelKind::RandomForest;
  model.hyper = h;
  model.feature_count = x.cols();
  model.params = std::move(params);
  return model;
}

}  // namespace commentrel
