#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "commentrel/error.hpp"
#include "commentrel/features.hpp"
#include "commentrel/sparse_matrix.hpp"
#include "oracles.hpp"

using namespace commentrel;

namespace {

DocTermMatrix dtm(const oracle::Dense& counts) {
  return DocTermMatrix(SparseMatrix::from_dense(counts));
}

void check_close(const SparseMatrix& got, const oracle::Dense& want, double tol) {
  const auto dense = got.to_dense();
  REQUIRE(dense.size() == want.size());
  for (std::size_t r = 0; r < want.size(); ++r) {
    REQUIRE(dense[r].size() == want[r].size());
    for (std::size_t c = 0; c < want[r].size(); ++c) {
      CHECK(std::fabs(dense[r][c] - want[r][c]) <= tol);
    }
  }
}

// "a a b" / "a c" / "b b b c"
const oracle::Dense kThreeDocs = {{2, 1, 0}, {1, 0, 1}, {0, 3, 1}};

}  // namespace

TEST_CASE("tokenize") {
  CHECK(tokenize("").empty());
  CHECK(tokenize("Check overflow // TODO") == TokenList{"check", "overflow", "todo"});
  CHECK(tokenize("/* free the buffer */") == TokenList{"free", "the", "buffer"});
  CHECK(tokenize("a b2 x_y caf\xc3\xa9") == TokenList{"b2", "caf"});
  TokenizerConfig keep_case;
  keep_case.lowercase = false;
  CHECK(tokenize("Foo BAR", keep_case) == TokenList{"Foo", "BAR"});
  TokenizerConfig stop;
  stop.stopwords = {"the"};
  CHECK(tokenize("free the buffer", stop) == TokenList{"free", "buffer"});
}

TEST_CASE("build_vocabulary") {
  const std::vector<TokenList> docs = {{"a", "b"}, {"b", "c"}};
  CHECK(build_vocabulary(docs, 1).terms() == std::vector<std::string>{"a", "b", "c"});
  CHECK(build_vocabulary(docs, 2).terms() == std::vector<std::string>{"b"});
  CHECK_THROWS_AS(build_vocabulary({{"a"}}, 2), Error);
  try {
    build_vocabulary({{"a"}}, 2);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyVocabulary);
  }
  const auto v = build_vocabulary(docs, 1);
  CHECK(v.index_of("c") == 2u);
  CHECK_FALSE(v.index_of("zz").has_value());
  CHECK(vocabulary_from_json(vocabulary_to_json(v)) == v);
}

TEST_CASE("count_matrix") {
  const Vocabulary v({"a", "b"}, 1);
  const auto m = count_matrix({{"b", "b", "a"}, {"z"}, {}}, v);
  CHECK(m.counts().to_dense() ==
        oracle::Dense{{1, 2}, {0, 0}, {0, 0}});
  CHECK_THROWS_AS(DocTermMatrix(SparseMatrix::from_dense({{0.5}})), Error);
}

TEST_CASE("tfidf: worked examples") {
  // term in every doc -> idf factor 1
  const auto all = weight_tfidf(dtm({{1, 1}, {2, 1}}), false);
  CHECK(all.values.at(1, 0) == doctest::Approx(2.0));
  // single document, counts [1,2], normalized
  const auto one = weight_tfidf(dtm({{1, 2}}), true);
  CHECK(one.values.at(0, 0) == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-12));
  CHECK(one.values.at(0, 1) == doctest::Approx(2.0 / std::sqrt(5.0)).epsilon(1e-12));
  CHECK(one.row_normalized);
}

TEST_CASE("tfidf and logentropy: three-document fixture against the oracle") {
  for (bool norm : {false, true}) {
    check_close(weight_tfidf(dtm(kThreeDocs), norm).values, oracle::tfidf(kThreeDocs, norm),
                1e-12);
    check_close(weight_logentropy(dtm(kThreeDocs), norm).values,
                oracle::logentropy(kThreeDocs, norm), 1e-12);
  }
  // hand values: a has df 2 in N=3 -> ln(4/3)+1
  const auto w = weight_tfidf(dtm(kThreeDocs), false);
  CHECK(w.values.at(0, 0) == doctest::Approx(2.0 * (std::log(4.0 / 3.0) + 1.0)));
}

TEST_CASE("logentropy: global weight examples") {
  // tf = 1 in each of N = 3 docs: 1 - log2(3)/log2(4)
  const auto t = TermWeighting::fit(dtm({{1}, {1}, {1}}), WeightScheme::LogEntropy, false);
  CHECK(t.global_weights()[0] == doctest::Approx(0.2075187).epsilon(1e-7));
  CHECK(t.global_weights()[0] == doctest::Approx(1.0 - std::log2(3.0) / 2.0).epsilon(1e-15));
  // a term in exactly one document keeps global weight 1
  const auto single = weight_logentropy(dtm({{3, 1}, {0, 1}}), false);
  CHECK(single.values.at(0, 0) == doctest::Approx(2.0));
}

TEST_CASE("weighting properties on random corpora") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rc = oracle::random_corpus(rng, 10, 15);
    const auto m = dtm(rc.counts);
    for (auto scheme : {WeightScheme::TfIdf, WeightScheme::LogEntropy}) {
      const auto raw = TermWeighting::fit(m, scheme, false).apply(m);
      const auto nrm = TermWeighting::fit(m, scheme, true).apply(m);
      // sparsity preservation, except log-entropy globals that vanish
      for (std::size_t r = 0; r < rc.counts.size(); ++r) {
        for (std::size_t c = 0; c < rc.counts[r].size(); ++c) {
          if (rc.counts[r][c] == 0) CHECK(raw.values.at(r, c) == 0.0);
          if (scheme == WeightScheme::TfIdf && rc.counts[r][c] > 0) {
            CHECK(raw.values.at(r, c) > 0.0);
          }
        }
        if (nrm.values.row_indices(r).size() > 0) {
          CHECK(std::fabs(nrm.values.row_norm(r) - 1.0) <= 1e-9);
        }
      }
      // global weight bounds for log-entropy
      if (scheme == WeightScheme::LogEntropy) {
        const auto t = TermWeighting::fit(m, scheme, false);
        const auto df = m.counts().column_nnz();
        for (std::size_t i = 0; i < df.size(); ++i) {
          if (df[i] == 0) continue;
          CHECK(t.global_weights()[i] > 0.0);
          CHECK(t.global_weights()[i] <= 1.0);
        }
      }
      // document order invariance
      std::vector<std::size_t> perm(rc.counts.size());
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      const auto pm = DocTermMatrix(m.counts().select_rows(perm));
      const auto pw = TermWeighting::fit(pm, scheme, true).apply(pm);
      for (std::size_t r = 0; r < perm.size(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
          CHECK(pw.values.at(r, c) == nrm.values.at(perm[r], c));
        }
      }
    }
  }
}

TEST_CASE("tfidf is strictly increasing in tf with df fixed") {
  for (double tf = 1; tf < 10; ++tf) {
    const auto lo = weight_tfidf(dtm({{tf, 1}, {0, 1}}), false).values.at(0, 0);
    const auto hi = weight_tfidf(dtm({{tf + 1, 1}, {0, 1}}), false).values.at(0, 0);
    CHECK(hi > lo);
  }
}

TEST_CASE("fitted weighting applies training statistics to new rows") {
  const auto train = dtm(kThreeDocs);
  const auto t = TermWeighting::fit(train, WeightScheme::TfIdf, false);
  const auto applied = t.apply(dtm({{1, 0, 0}}));
  CHECK(applied.values.at(0, 0) == doctest::Approx(std::log(4.0 / 3.0) + 1.0));
  CHECK(TermWeighting::from_json(t.to_json()) == t);
  CHECK_THROWS_AS(t.apply(dtm({{1, 0}})), Error);
}

TEST_CASE("sparse matrix basics") {
  const auto m = SparseMatrix::from_triplets(2, 3, {{0, 2, 1.0}, {0, 2, 2.0}, {1, 0, 5.0},
                                                    {1, 1, 1.0}, {1, 1, -1.0}});
  CHECK(m.nnz() == 2);
  CHECK(m.at(0, 2) == 3.0);
  CHECK(m.at(1, 1) == 0.0);
  CHECK_THROWS_AS(SparseMatrix::from_triplets(1, 1, {{0, 4, 1.0}}), Error);
  const std::vector<std::size_t> cols{2, 0};
  const auto s = m.select_columns(cols);
  CHECK(s.to_dense() == oracle::Dense{{3, 0}, {0, 5}});
  const std::vector<std::size_t> bad{9};
  CHECK_THROWS_AS(m.select_columns(bad), Error);
  CHECK(m.column_sums() == std::vector<double>{5, 0, 3});

  std::stringstream io;
  write_triplets(io, m);
  CHECK(read_triplets(io) == m);
  std::stringstream broken("%commentrel-matrix 1 2 2 5\n0 0 1\n");
  CHECK_THROWS_AS(read_triplets(broken), Error);
}
