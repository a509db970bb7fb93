#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cmg/errors.hpp"
#include "cmg/fileio.hpp"
#include "cmg/retrieval.hpp"
#include "cmg/rng.hpp"
#include "doctest.h"
#include "helpers.hpp"

using cmg::DenseVector;
using cmg::Err;
using cmg::Error;
using cmg::Neighbor;
using cmg::NNIndex;
using cmg::SparseVector;
using cmg::VectorBackend;

namespace {

SparseVector sp(std::vector<std::pair<uint32_t, double>> e) {
  return SparseVector{std::move(e)};
}

DenseVector random_dense(cmg::DetRng& rng, size_t dim) {
  DenseVector v;
  for (size_t i = 0; i < dim; ++i) {
    v.values.push_back(rng.unit() * 2.0 - 1.0);
  }
  return v;
}

SparseVector random_sparse(cmg::DetRng& rng, size_t dim) {
  SparseVector v;
  for (uint32_t i = 0; i < dim; ++i) {
    if (rng.below(3) == 0) {
      v.entries.emplace_back(i, rng.unit() * 2.0 - 1.0);
    }
  }
  return v;
}

}  // namespace

TEST_CASE("cosine on hand-checked vectors") {
  // identical direction
  CHECK(cmg::cosine(sp({{0, 2.0}, {3, 1.0}}), sp({{0, 4.0}, {3, 2.0}})) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // orthogonal (disjoint support)
  CHECK(cmg::cosine(sp({{0, 1.0}}), sp({{1, 1.0}})) == 0.0);
  // 45 degrees: (1,0) vs (1,1) -> 1/sqrt(2), frozen constant
  CHECK(cmg::cosine(sp({{0, 1.0}}), sp({{0, 1.0}, {1, 1.0}})) ==
        doctest::Approx(0.7071067811865475).epsilon(1e-12));
  // zero vector pins the result to 0 rather than NaN
  CHECK(cmg::cosine(sp({}), sp({{0, 1.0}})) == 0.0);
  CHECK(cmg::cosine(sp({}), sp({})) == 0.0);
}

TEST_CASE("cosine dense overload") {
  DenseVector a{{1.0, 0.0}};
  DenseVector b{{1.0, 1.0}};
  CHECK(cmg::cosine(a, b) == doctest::Approx(0.7071067811865475));
  DenseVector zero{{0.0, 0.0}};
  CHECK(cmg::cosine(a, zero) == 0.0);
  DenseVector wrong{{1.0, 2.0, 3.0}};
  try {
    cmg::cosine(a, wrong);
    FAIL("expected a dimension mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Err::DimensionMismatch);
  }
}

TEST_CASE("cosine agrees between sparse and equivalent dense vectors") {
  cmg::DetRng rng(31);
  for (int iter = 0; iter < 100; ++iter) {
    size_t dim = 1 + rng.below(20);
    SparseVector a = random_sparse(rng, dim);
    SparseVector b = random_sparse(rng, dim);
    DenseVector da, db;
    da.values.assign(dim, 0.0);
    db.values.assign(dim, 0.0);
    for (const auto& [id, w] : a.entries) da.values[id] = w;
    for (const auto& [id, w] : b.entries) db.values[id] = w;
    CHECK(cmg::cosine(a, b) ==
          doctest::Approx(cmg::cosine(da, db)).epsilon(1e-12));
  }
}

TEST_CASE("nearest returns descending similarity with index tiebreak") {
  std::vector<SparseVector> train = {
      sp({{0, 1.0}}),          // 0: east
      sp({{1, 1.0}}),          // 1: north
      sp({{0, 1.0}, {1, 1.0}}),  // 2: diagonal
      sp({{0, 2.0}}),          // 3: east again (same direction as 0)
  };
  NNIndex index = NNIndex::build(
      train, {"msg east", "msg north", "msg diag", "msg east2"});
  std::vector<Neighbor> top = index.nearest(sp({{0, 1.0}}), 4);
  REQUIRE(top.size() == 4);
  // sim 1.0 for 0 and 3 -> lower index first
  CHECK(top[0].train_index == 0);
  CHECK(top[1].train_index == 3);
  CHECK(top[0].similarity == doctest::Approx(1.0));
  CHECK(top[2].train_index == 2);  // 1/sqrt(2)
  CHECK(top[3].train_index == 1);  // 0
  CHECK(index.generate(sp({{0, 1.0}})) == "msg east");
}

TEST_CASE("zero query ties everything and returns the first entry") {
  std::vector<SparseVector> train = {sp({{0, 1.0}}), sp({{1, 1.0}})};
  NNIndex index = NNIndex::build(train, {"first", "second"});
  CHECK(index.generate(sp({})) == "first");
}

TEST_CASE("k is clamped to the index size and zero is rejected") {
  std::vector<SparseVector> train = {sp({{0, 1.0}}), sp({{1, 1.0}})};
  NNIndex index = NNIndex::build(train, {"a", "b"});
  CHECK(index.nearest(sp({{0, 1.0}}), 10).size() == 2);
  CHECK_THROWS_AS(index.nearest(sp({{0, 1.0}}), 0), Error);
}

TEST_CASE("empty index and backend mixing are rejected") {
  NNIndex index = NNIndex::build(std::vector<SparseVector>{},
                                 std::vector<std::string>{});
  try {
    index.nearest(sp({{0, 1.0}}), 1);
    FAIL("expected empty-index error");
  } catch (const Error& e) {
    CHECK(e.code() == Err::EmptyIndex);
  }

  std::vector<SparseVector> train = {sp({{0, 1.0}})};
  NNIndex sparse_index = NNIndex::build(train, {"m"});
  DenseVector dense_query{{1.0}};
  try {
    sparse_index.nearest(dense_query, 1);
    FAIL("expected backend mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Err::BackendMismatch);
  }

  std::vector<DenseVector> dtrain = {DenseVector{{1.0, 0.0}}};
  NNIndex dense_index = NNIndex::build(dtrain, {"m"});
  CHECK(dense_index.backend() == VectorBackend::embedding);
  CHECK_THROWS_AS(dense_index.nearest(sp({{0, 1.0}}), 1), Error);
  // dense query of the wrong width
  CHECK_THROWS_AS(dense_index.nearest(DenseVector{{1.0, 2.0, 3.0}}, 1),
                  Error);
}

TEST_CASE("build rejects vector/message length mismatch") {
  std::vector<SparseVector> train = {sp({{0, 1.0}})};
  CHECK_THROWS_AS(NNIndex::build(train, {"a", "b"}), Error);
}

TEST_CASE("nearest matches brute force on random sparse instances") {
  cmg::DetRng rng(2024);
  for (int iter = 0; iter < 250; ++iter) {
    size_t dim = 1 + rng.below(50);
    size_t n = 1 + rng.below(100);
    std::vector<SparseVector> train;
    std::vector<std::string> msgs;
    for (size_t i = 0; i < n; ++i) {
      train.push_back(random_sparse(rng, dim));
      msgs.push_back("m" + std::to_string(i));
    }
    NNIndex index = NNIndex::build(train, msgs);
    SparseVector query = random_sparse(rng, dim);

    size_t best = 0;
    double best_sim = cmg::cosine(query, train[0]);
    for (size_t i = 1; i < n; ++i) {
      double sim = cmg::cosine(query, train[i]);
      if (sim > best_sim) {
        best_sim = sim;
        best = i;
      }
    }
    std::vector<Neighbor> got = index.nearest(query, 1);
    REQUIRE(got.size() == 1);
    CHECK(got[0].train_index == best);
    CHECK(got[0].similarity == doctest::Approx(best_sim).epsilon(1e-12));
  }
}

TEST_CASE("nearest matches brute force on random dense instances") {
  cmg::DetRng rng(4096);
  for (int iter = 0; iter < 100; ++iter) {
    size_t dim = 1 + rng.below(50);
    size_t n = 1 + rng.below(100);
    std::vector<DenseVector> train;
    std::vector<std::string> msgs;
    for (size_t i = 0; i < n; ++i) {
      train.push_back(random_dense(rng, dim));
      msgs.push_back("m" + std::to_string(i));
    }
    NNIndex index = NNIndex::build(train, msgs);
    DenseVector query = random_dense(rng, dim);

    size_t best = 0;
    double best_sim = cmg::cosine(query, train[0]);
    for (size_t i = 1; i < n; ++i) {
      double sim = cmg::cosine(query, train[i]);
      if (sim > best_sim) {
        best_sim = sim;
        best = i;
      }
    }
    CHECK(index.nearest(query, 1)[0].train_index == best);
    CHECK(index.generate(query) == msgs[best]);
  }
}

TEST_CASE("index save/load round-trip (both backends)") {
  testutil::TempDir tmp;
  cmg::DetRng rng(8);

  std::vector<SparseVector> strain;
  std::vector<std::string> smsgs;
  for (size_t i = 0; i < 12; ++i) {
    strain.push_back(random_sparse(rng, 9));
    smsgs.push_back("sparse message " + std::to_string(i));
  }
  NNIndex sindex = NNIndex::build(strain, smsgs);
  sindex.save(tmp.file("s.index"));
  NNIndex sloaded = NNIndex::load(tmp.file("s.index"));
  REQUIRE(sloaded.size() == sindex.size());
  CHECK(sloaded.backend() == VectorBackend::tfidf);
  for (int q = 0; q < 20; ++q) {
    SparseVector query = random_sparse(rng, 9);
    std::vector<Neighbor> a = sindex.nearest(query, 3);
    std::vector<Neighbor> b = sloaded.nearest(query, 3);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].train_index == b[i].train_index);
      CHECK(a[i].similarity == b[i].similarity);  // bit-exact persistence
    }
  }

  std::vector<DenseVector> dtrain;
  std::vector<std::string> dmsgs;
  for (size_t i = 0; i < 7; ++i) {
    dtrain.push_back(random_dense(rng, 5));
    dmsgs.push_back("dense message " + std::to_string(i));
  }
  NNIndex dindex = NNIndex::build(dtrain, dmsgs);
  dindex.save(tmp.file("d.index"));
  NNIndex dloaded = NNIndex::load(tmp.file("d.index"));
  CHECK(dloaded.backend() == VectorBackend::embedding);
  for (int q = 0; q < 10; ++q) {
    DenseVector query = random_dense(rng, 5);
    CHECK(dindex.generate(query) == dloaded.generate(query));
  }
}

TEST_CASE("index load rejects garbage") {
  testutil::TempDir tmp;
  cmg::write_file_atomic(tmp.file("bad.index"), "not an index at all\n");
  CHECK_THROWS_AS(NNIndex::load(tmp.file("bad.index")), Error);

  cmg::write_file_atomic(
      tmp.file("badentry.index"),
      "cmg-nnindex-v1\nbackend tfidf\nentries 1\nv zzz\nm hello\n");
  CHECK_THROWS_AS(NNIndex::load(tmp.file("badentry.index")), Error);
}
