#include <doctest.h>

#include "oracles.hpp"
#include "twistlab/errors.hpp"
#include "twistlab/rmatrix.hpp"
#include "twistlab/twist.hpp"

using namespace twistlab;

namespace {

ComplexMatrix f12_by_hand(cplx xi) {
  ComplexMatrix f(4, 4);
  f << 1.0, 0.0, 0.0, 0.0,
       xi, 1.0, 0.0, 0.0,
       0.0, 0.0, 1.0, 0.0,
       0.0, 0.0, -xi, 1.0;
  return f;
}

}  // namespace

TEST_CASE("spin representations satisfy the sl(2) relations") {
  for (const double s : {0.5, 1.0, 1.5, 2.0}) {
    const SpinRep r = make_spin_rep(s);
    CHECK(r.dim == static_cast<Eigen::Index>(2 * s + 1));
    CHECK((commutator(r.h, r.e) + 2.0 * r.e).norm() < 1e-13);
    CHECK((commutator(r.h, r.f) - 2.0 * r.f).norm() < 1e-13);
    CHECK((commutator(r.e, r.f) + r.h).norm() < 1e-13);
  }
  CHECK((make_spin_rep(0.5).e - pauli::minus()).norm() == 0.0);
  CHECK_THROWS_AS(make_spin_rep(0.3), DomainError);
}

TEST_CASE("nilpotent_exp sums the terminating series") {
  ComplexMatrix n = ComplexMatrix::Zero(3, 3);
  n(1, 0) = 2.0;
  n(2, 1) = 3.0;
  ComplexMatrix expected = identity(3) + n + 0.5 * n * n;
  CHECK((nilpotent_exp(n) - expected).norm() < 1e-15);
  CHECK_THROWS_AS(nilpotent_exp(identity(2)), DomainError);
}

TEST_CASE("exp(-sigma) = 1 - 2 xi e") {
  for (const double s : {0.5, 1.0, 1.5}) {
    const SpinRep r = make_spin_rep(s);
    for (const cplx xi : {cplx{0.0}, cplx{0.7}, cplx{-1.3, 0.4}}) {
      const ComplexMatrix lhs = nilpotent_exp(-sigma_element(r, xi));
      CHECK((lhs - (identity(r.dim) - 2.0 * xi * r.e)).norm() < 1e-13);
    }
  }
}

TEST_CASE("universal twist on spin 1/2 is F12 entry for entry") {
  const SpinRep half = make_spin_rep(0.5);
  for (const double xi : {0.0, 1.0, -2.0, 0.5}) {
    const ComplexMatrix f = universal_twist(half, half, xi);
    CHECK((f - f12_by_hand(xi)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((build_f12(xi) - f12_by_hand(xi)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((universal_twist_inverse(half, half, xi) * f - identity(4)).norm() < 1e-15);
  }
}

TEST_CASE("twist series and closed form agree") {
  const SpinRep half = make_spin_rep(0.5), one = make_spin_rep(1.0), th = make_spin_rep(1.5);
  for (const cplx xi : {cplx{0.3}, cplx{-0.8, 0.2}}) {
    CHECK(relative_residual(universal_twist_series(half, one, xi), universal_twist(half, one, xi)) < 1e-12);
    CHECK(relative_residual(universal_twist_series(th, one, xi), universal_twist(th, one, xi)) < 1e-12);
  }
}

TEST_CASE("cocycle condition") {
  const SpinRep half = make_spin_rep(0.5), one = make_spin_rep(1.0);
  for (const cplx xi : {cplx{0.0}, cplx{0.4}, cplx{-0.9}, cplx{0.2, 0.6}}) {
    CHECK(verify_cocycle(half, half, half, xi) < 1e-12);
    CHECK(verify_cocycle(half, half, one, xi) < 1e-12);
  }
}

TEST_CASE("twisted coproduct: sigma becomes primitive, e is deformed") {
  const SpinRep half = make_spin_rep(0.5);
  CHECK(twisted_sigma_primitivity(half, half, 0.37) < 1e-12);
  const double moved = relative_residual(twisted_coproduct(half, half, Generator::e, 0.37),
                                         primitive_coproduct(half, half, Generator::e));
  CHECK(moved > 1e-2);
  CHECK(relative_residual(twisted_coproduct(half, half, Generator::e, 0.0),
                          primitive_coproduct(half, half, Generator::e)) == 0.0);
}

TEST_CASE("R-matrix construction matches the entry table and the twisted form") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const cplx xi = d(rng);
    const cplx u = oracle::random_point(rng);
    const TwistParams p{xi, 1.0};
    CHECK((build_r_xi(xi) - oracle::r_xi(xi)).norm() == 0.0);
    CHECK((build_r_xi_product(xi) - oracle::r_xi(xi)).norm() < 1e-13);
    CHECK((build_r(u, p) - oracle::r_u(u, xi, 1.0)).norm() < 1e-14);
    CHECK((build_r_twisted(u, p) - oracle::r_u(u, xi, 1.0)).norm() < 1e-13);
    CHECK((build_f21(xi) - oracle::swap() * f12_by_hand(xi) * oracle::swap()).norm() == 0.0);
    CHECK((build_r_poly(u, p) - u * oracle::r_u(u, xi, 1.0)).norm() < 1e-13);
  }
  CHECK_THROWS_AS(build_r(0.0, TwistParams{0.3, 1.0}), DomainError);
}

TEST_CASE("Yang-Baxter equation against a direct three-factor evaluation") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 10; ++i) {
    const cplx xi{0.3 * i - 1.2, 0.1 * i};
    const cplx u = oracle::random_point(rng), v = oracle::random_point(rng);
    const TwistParams p{xi, 1.0};
    const auto r = [&](cplx z, int a, int b) { return oracle::embed_pair(oracle::r_u(z, xi, 1.0), a, b, 3); };
    const double direct = oracle::rel(r(u - v, 1, 2) * r(u, 1, 3) * r(v, 2, 3),
                                      r(v, 2, 3) * r(u, 1, 3) * r(u - v, 1, 2));
    CHECK(direct < 1e-12);
    CHECK(verify_ybe(u, v, p) < 1e-12);
  }
}

TEST_CASE("regularity, projectors and unitarity") {
  const TwistParams p{0.6, 1.0};
  CHECK(verify_regularity(p).normalized_residual < 1e-14);
  const SpectralProjectors pr = spectral_projectors(0.6);
  CHECK((pr.plus + pr.minus - identity(4)).norm() < 1e-14);
  CHECK((pr.plus * pr.minus).norm() < 1e-14);
  CHECK(std::abs(pr.plus.trace() - 3.0) < 1e-14);
  const UnitarityProbe probe = probe_unitarity(cplx{1.7, 0.3}, p);
  const cplx u{1.7, 0.3};
  CHECK(probe.deviation < 1e-12);
  CHECK(std::abs(probe.scalar - (1.0 - 1.0 / (u * u))) < 1e-12);
}
