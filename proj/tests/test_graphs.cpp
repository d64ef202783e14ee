#include <algorithm>

#include <doctest.h>

#include "netred/errors.hpp"
#include "netred/graphs.hpp"
#include "support.hpp"

using namespace netred;
using doctest::Approx;

namespace {

WsbmParams two_by_two() {
  WsbmParams p;
  p.sizes = {2, 2};
  p.q = Matrix::Ones(2, 2);
  p.w = (Matrix(2, 2) << 3, 1, 1, 3).finished();
  return p;
}

std::vector<double> dense_spectrum(const Matrix& l) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(l);
  return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

}  // namespace

TEST_CASE("partition basics") {
  const std::vector<int> sizes{2, 3, 1};
  const Partition p = Partition::contiguous(sizes);
  CHECK(p.k() == 3);
  CHECK(p.n() == 6);
  CHECK(p.assignment() == std::vector<int>{0, 0, 1, 1, 1, 2});
  CHECK(p.n_min() == 1);
  CHECK(p.n_max() == 3);
  CHECK(p.balance() == Approx(3.0));
  const Matrix ind = p.indicator();
  CHECK(ind.colwise().sum().transpose() == Vector((Vector(3) << 2, 3, 1).finished()));
  CHECK(p.members(1) == std::vector<Index>{2, 3, 4});
  try {
    Partition({0, 0, 2}, 3);
    FAIL("expected EmptyBlock");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyBlock);
  }
}

TEST_CASE("label matching is permutation invariant") {
  const Partition truth({0, 0, 1, 1, 2, 2}, 3);
  const Partition relabeled({2, 2, 0, 0, 1, 1}, 3);
  const Partition off_by_one({2, 2, 0, 1, 1, 1}, 3);
  CHECK(same_partition(truth, relabeled));
  CHECK_FALSE(same_partition(truth, off_by_one));
  CHECK(match_labels(relabeled, truth).agreements == 6);
  CHECK(match_labels(off_by_one, truth).agreements == 5);
  CHECK(match_labels(relabeled, truth).mapping == std::vector<int>{1, 2, 0});
}

TEST_CASE("laplacian examples and invariants") {
  CHECK(laplacian((Matrix(2, 2) << 0, 1, 1, 0).finished()) == (Matrix(2, 2) << 1, -1, -1, 1).finished());
  CHECK(laplacian(Matrix::Zero(3, 3)) == Matrix::Zero(3, 3));
  CHECK(laplacian((Matrix(3, 3) << 0, 2, 0, 2, 0, 3, 0, 3, 0).finished()) ==
        (Matrix(3, 3) << 2, -2, 0, -2, 5, -3, 0, -3, 3).finished());
  // A self-loop changes nothing.
  CHECK(laplacian((Matrix(2, 2) << 4, 1, 1, 0).finished()) == (Matrix(2, 2) << 1, -1, -1, 1).finished());

  const WsbmParams params = three_area_params();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Matrix a = sample_adjacency(params, seed);
    const Matrix l = laplacian(a);
    CHECK((l - l.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(l.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-10 * 80 * a.maxCoeff());
    for (Index i = 0; i < 80; ++i)
      for (Index j = 0; j < 80; ++j)
        if (i != j) CHECK(l(i, j) <= 0.0);
    CHECK(dense_spectrum(l).front() >= -1e-9);
  }
}

TEST_CASE("sample_adjacency deterministic edge cases") {
  WsbmParams p = three_area_params();
  p.q = Matrix::Ones(3, 3);
  const Matrix full = sample_adjacency(p, 123);
  const Partition blocks = p.partition();
  for (Index i = 0; i < p.n(); ++i)
    for (Index j = 0; j < p.n(); ++j) CHECK(full(i, j) == p.w(blocks.label(i), blocks.label(j)));
  p.q = Matrix::Zero(3, 3);
  CHECK(sample_adjacency(p, 123) == Matrix::Zero(80, 80));
}

TEST_CASE("sample_adjacency reproducibility and edge frequency") {
  const WsbmParams params = three_area_params();
  const Matrix a = sample_adjacency(params, 42);
  const Matrix b = sample_adjacency(params, 42);
  CHECK(std::equal(a.data(), a.data() + a.size(), b.data()));
  CHECK(a != sample_adjacency(params, 43));

  // 500 draws of one within-block pair: Binomial(500, 0.8) has sd 0.018, so
  // 0.8 +- 0.06 is a 3.4 sigma window. The pooled block frequency is far tighter.
  int hits = 0;
  double pooled = 0.0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const Matrix s = sample_adjacency(params, seed);
    hits += s(5, 3) > 0.0;
    int edges = 0;
    for (Index i = 0; i < 20; ++i)
      for (Index j = 0; j < i; ++j) edges += s(i, j) > 0.0;
    pooled += edges / 190.0;
  }
  CHECK(std::abs(hits / 500.0 - 0.8) <= 0.06);
  CHECK(std::abs(pooled / 500.0 - 0.8) <= 0.01);
}

TEST_CASE("expected_laplacian examples") {
  WsbmParams single;
  single.sizes = {5};
  single.q = Matrix::Ones(1, 1);
  single.w = Matrix::Constant(1, 1, 2.5);
  const Matrix expected = Matrix(Vector::Constant(5, 5 * 2.5).asDiagonal()) - 2.5 * Matrix::Ones(5, 5);
  CHECK((expected_laplacian(single).l_blk - expected).cwiseAbs().maxCoeff() <= 1e-12);

  const auto two = expected_laplacian(two_by_two());
  const Matrix hand = (Matrix(4, 4) << 5, -3, -1, -1,  //
                       -3, 5, -1, -1,                  //
                       -1, -1, 5, -3,                  //
                       -1, -1, -3, 5)
                          .finished();
  CHECK((two.l_blk - hand).cwiseAbs().maxCoeff() <= 1e-12);

  CHECK(expected_laplacian(three_area_params()).b(0, 0) == Approx(16.0));
}

TEST_CASE("block_spectrum_oracle examples") {
  const auto spec = block_spectrum_oracle(two_by_two());
  CHECK(spec.eigenvalues_clustered[0] == Approx(0.0).scale(1.0));
  CHECK(spec.eigenvalues_clustered[1] == Approx(4.0));
  REQUIRE(spec.eigenvalue_bulk.size() == 2);
  CHECK(spec.eigenvalue_bulk[0] == Approx(8.0));
  CHECK(spec.eigenvalue_bulk[1] == Approx(8.0));
  CHECK(spec.lambda_k1_lower == Approx(8.0));
  CHECK(spec.delta * spec.n_min == Approx(2.0));
  const std::vector<int> sizes{2, 2};
  const auto all = spec.all_eigenvalues(sizes);
  const auto dense = dense_spectrum(expected_laplacian(two_by_two()).l_blk);
  REQUIRE(all.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(all[i] == Approx(dense[i]).scale(1.0).epsilon(1e-12));

  WsbmParams single;
  single.sizes = {6};
  single.q = Matrix::Ones(1, 1);
  single.w = Matrix::Constant(1, 1, 1.5);
  const auto one = block_spectrum_oracle(single);
  CHECK(one.eigenvalues_clustered.size() == 1);
  CHECK(one.eigenvalue_bulk[0] == Approx(9.0));

  const auto eq = block_spectrum_oracle(three_area_params());
  CHECK(eq.delta == Approx(15.4));
}

TEST_CASE("block_spectrum_oracle matches dense eigendecomposition") {
  Rng rng(2024);
  std::vector<WsbmParams> cases{three_area_params(), two_by_two()};
  for (int i = 0; i < 20; ++i) cases.push_back(testing::random_separated_params(2 + i % 3, rng));
  for (const auto& p : cases) {
    const auto spec = block_spectrum_oracle(p);
    CHECK(spec.delta > 0.0);
    const auto all = spec.all_eigenvalues(p.sizes);
    const auto dense = dense_spectrum(expected_laplacian(p).l_blk);
    REQUIRE(all.size() == dense.size());
    for (std::size_t j = 0; j < all.size(); ++j) CHECK(std::abs(all[j] - dense[j]) <= 1e-8);
    CHECK(std::abs(spec.eigenvalues_clustered.front()) <= 1e-9);
    const double bulk_min = *std::min_element(spec.eigenvalue_bulk.begin(), spec.eigenvalue_bulk.end());
    CHECK(bulk_min >= spec.eigenvalues_clustered.back() + spec.delta * spec.n_min - 1e-9);
  }
}

TEST_CASE("concentration_stat edge cases") {
  const std::vector<std::uint64_t> seeds{0, 1, 2};
  WsbmParams p = three_area_params();
  p.q = Matrix::Ones(3, 3);
  for (double v : concentration_stat(p, seeds)) CHECK(v <= 1e-9);
  p.q = Matrix::Zero(3, 3);
  for (double v : concentration_stat(p, seeds)) CHECK(v == 0.0);
  for (double v : concentration_stat(three_area_params(), seeds)) CHECK(v > 0.0);
}

TEST_CASE("WSBM parameter validation") {
  WsbmParams p = three_area_params();
  CHECK_NOTHROW(p.validate());
  p.q(0, 1) = 1.5;
  CHECK_THROWS_AS(p.validate(), Error);
  p = three_area_params();
  p.w(0, 1) = 0.3;
  CHECK_THROWS_AS(p.validate(), Error);
  p = three_area_params();
  p.sizes[1] = 0;
  CHECK_THROWS_AS(p.validate(), Error);
  CHECK(three_area_params().scaled(2).n() == 160);
}
