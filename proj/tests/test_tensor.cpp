#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "twistlab/errors.hpp"
#include "twistlab/tensor.hpp"

using namespace twistlab;

namespace {

ComplexMatrix random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> d;
  ComplexMatrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = cplx{d(rng), d(rng)};
  return m;
}

}  // namespace

TEST_CASE("kron matches the index-loop oracle") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix a = random_matrix(rng, 1 + trial % 3, 2 + trial % 2);
    const ComplexMatrix b = random_matrix(rng, 2, 1 + trial % 4);
    CHECK((kron(a, b) - oracle::kron(a, b)).norm() == 0.0);
  }
}

TEST_CASE("embedding puts factor 1 leftmost") {
  std::mt19937_64 rng(11);
  const ComplexMatrix op = random_matrix(rng, 2, 2);
  const ComplexMatrix pair = random_matrix(rng, 4, 4);
  for (int n = 1; n <= 4; ++n) {
    for (int s = 1; s <= n; ++s) {
      CHECK((embed_at_site(op, s, n) - oracle::embed_site(op, s, n)).norm() == 0.0);
    }
  }
  for (int n = 2; n <= 4; ++n) {
    for (int p = 1; p <= n; ++p) {
      for (int q = 1; q <= n; ++q) {
        if (p == q) continue;
        CHECK((embed_pair(pair, p, q, n) - oracle::embed_pair(pair, p, q, n)).norm() < 1e-14);
      }
    }
  }
  CHECK_THROWS_AS(embed_at_site(op, 0, 3), DomainError);
  CHECK_THROWS_AS(embed_pair(pair, 2, 2, 3), DomainError);
}

TEST_CASE("apply_site_left equals multiplying by the embedded operator") {
  std::mt19937_64 rng(3);
  const ComplexMatrix op = random_matrix(rng, 2, 2);
  for (int s = 1; s <= 4; ++s) {
    ComplexMatrix m = random_matrix(rng, 16, 5);
    const ComplexMatrix expected = oracle::embed_site(op, s, 4) * m;
    apply_site_left(op, s, 4, m);
    CHECK((m - expected).norm() < 1e-13);
  }
}

TEST_CASE("basis states and magnetisation") {
  const ComplexVector omega = all_down(3);
  CHECK(omega.size() == 8);
  CHECK(omega(7) == cplx{1.0});
  CHECK(omega.norm() == doctest::Approx(1.0));
  const std::vector<int> bits = {0, 1, 1};
  CHECK(product_state(bits)(3) == cplx{1.0});
  CHECK(total_sz(0, 3) == 3);
  CHECK(total_sz(7, 3) == -3);
  CHECK(total_sz(3, 3) == -1);
  CHECK((pauli::minus() * ComplexVector::Unit(2, 0) - ComplexVector::Unit(2, 1)).norm() == 0.0);
  CHECK((permutation_op() - oracle::swap()).norm() == 0.0);
}

TEST_CASE("relative_residual") {
  const ComplexMatrix z = ComplexMatrix::Zero(2, 2);
  CHECK(relative_residual(z, z) == 0.0);
  const ComplexMatrix i2 = identity(2);
  CHECK(relative_residual(i2, 2.0 * i2) == doctest::Approx(0.5));
}

TEST_CASE("matrix_from_rows rejects bad input") {
  CHECK(matrix_from_rows({{1.0, 2.0}, {3.0, 4.0}})(1, 0) == cplx{3.0});
  CHECK_THROWS_AS(matrix_from_rows({{1.0, 2.0}, {3.0}}), DomainError);
  CHECK_THROWS_AS(matrix_from_rows({{std::numeric_limits<double>::quiet_NaN()}}), DomainError);
}

TEST_CASE("eigenvalues of a defective triangular matrix are exact") {
  // A single 6x6 Jordan block perturbed in the strictly lower part: dense QR
  // loses accuracy here, the structural reduction does not.
  ComplexMatrix m = ComplexMatrix::Zero(6, 6);
  for (int i = 0; i < 6; ++i) m(i, i) = 2.0;
  for (int i = 1; i < 6; ++i) m(i, i - 1) = 1.0;
  const Spectrum s = eigenvalues(m);
  REQUIRE(s.size() == 6);
  for (const cplx z : s) CHECK(std::abs(z - 2.0) == 0.0);
}

TEST_CASE("eigenvalues of a generic matrix agree with the dense solver") {
  std::mt19937_64 rng(5);
  const ComplexMatrix m = random_matrix(rng, 8, 8);
  const SpectrumReport r = match_spectra(eigenvalues(m), eigenvalues_dense(m), 1e-10);
  CHECK(r.matched);
  // The trace is the eigenvalue sum.
  cplx sum = 0.0;
  for (const cplx z : eigenvalues(m)) sum += z;
  CHECK(std::abs(sum - m.trace()) < 1e-12);
}

TEST_CASE("irreducible blocks give a block-triangular ordering") {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = 1.0;
  m(1, 1) = 2.0;
  m(2, 2) = 3.0;
  m(3, 3) = 4.0;
  m(0, 1) = m(1, 0) = 1.0;  // {0,1} coupled
  m(3, 2) = 1.0;            // 3 depends on 2 only
  const auto blocks = irreducible_blocks(m);
  std::size_t total = 0;
  for (const auto& b : blocks) total += b.size();
  CHECK(total == 4);
  CHECK(blocks.size() == 3);
}

TEST_CASE("match_spectra pairs permuted multisets and rejects different ones") {
  const Spectrum a = {1.0, cplx{0.0, 1.0}, 2.0, 2.0};
  const Spectrum b = {2.0, cplx{0.0, 1.0}, 2.0, 1.0};
  CHECK(match_spectra(a, b, 1e-12).matched);
  const Spectrum c = {2.0, cplx{0.0, 1.0}, 1.0, 1.0};
  const SpectrumReport r = match_spectra(a, c, 1e-12);
  CHECK_FALSE(r.matched);
  CHECK(r.max_pair_distance == doctest::Approx(1.0));
  CHECK(distance_to_spectrum(cplx{0.0, 1.1}, a) == doctest::Approx(0.1));
}
