#include "twistlab/twist.hpp"

#include <cmath>

#include "twistlab/errors.hpp"

namespace twistlab {

void TwistParams::validate() const {
  const auto finite = [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
  if (!finite(xi) || !finite(eta)) throw DomainError("TwistParams: non-finite parameter");
  if (eta == cplx{}) throw DomainError("TwistParams: eta must be nonzero");
}

SpinRep make_spin_rep(double spin) {
  const double twice = 2.0 * spin;
  if (!(spin >= 0.0) || std::abs(twice - std::round(twice)) > 1e-12 || twice > 64.0) {
    throw DomainError("make_spin_rep: spin must be a nonnegative half-integer");
  }
  const auto dim = static_cast<Eigen::Index>(std::lround(twice)) + 1;
  const double s = static_cast<double>(dim - 1) / 2.0;

  SpinRep rep;
  rep.spin = s;
  rep.dim = dim;
  rep.h = ComplexMatrix::Zero(dim, dim);
  rep.e = ComplexMatrix::Zero(dim, dim);
  rep.f = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double m = s - static_cast<double>(k);
    rep.h(k, k) = 2.0 * m;
    if (k + 1 < dim) {
      const double c = std::sqrt((s + m) * (s - m + 1.0));
      rep.e(k + 1, k) = c;
      rep.f(k, k + 1) = c;
    }
  }
  return rep;
}

ComplexMatrix nilpotent_exp(const ComplexMatrix& x) {
  const Eigen::Index n = x.rows();
  ComplexMatrix sum = identity(n);
  ComplexMatrix term = identity(n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    term = term * x / static_cast<double>(k);
    if (term.isZero(0.0)) return sum;
    sum += term;
  }
  throw DomainError("nilpotent_exp: argument is not nilpotent");
}

ComplexMatrix sigma_of(const ComplexMatrix& nil, cplx xi) {
  const Eigen::Index n = nil.rows();
  const ComplexMatrix x = 2.0 * xi * nil;
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  ComplexMatrix power = identity(n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    power = power * x;
    if (power.isZero(0.0)) return sum;
    sum += power / static_cast<double>(k);
  }
  throw DomainError("sigma_of: argument is not nilpotent");
}

ComplexMatrix sigma_element(const SpinRep& rep, cplx xi) { return sigma_of(rep.e, xi); }

ComplexMatrix twist_from(const ComplexMatrix& h, const ComplexMatrix& e, cplx xi) {
  return nilpotent_exp(0.5 * kron(h, sigma_of(e, xi)));
}

ComplexMatrix universal_twist(const SpinRep& rep1, const SpinRep& rep2, cplx xi) {
  return twist_from(rep1.h, rep2.e, xi);
}

ComplexMatrix universal_twist_inverse(const SpinRep& rep1, const SpinRep& rep2, cplx xi) {
  return nilpotent_exp(-0.5 * kron(rep1.h, sigma_of(rep2.e, xi)));
}

ComplexMatrix universal_twist_series(const SpinRep& rep1, const SpinRep& rep2, cplx xi) {
  const Eigen::Index d1 = rep1.dim;
  ComplexMatrix sum = identity(d1 * rep2.dim);
  ComplexMatrix left = identity(d1);        // h(h+2)...(h+2k-2)
  ComplexMatrix right = identity(rep2.dim);  // e^k
  cplx coefficient = 1.0;                    // ξ^k / k!
  for (Eigen::Index k = 1; k < rep2.dim; ++k) {
    left = left * (rep1.h + 2.0 * static_cast<double>(k - 1) * identity(d1));
    right = right * rep2.e;
    coefficient *= xi / static_cast<double>(k);
    sum += coefficient * kron(left, right);
  }
  return sum;
}

double verify_cocycle(const SpinRep& rep1, const SpinRep& rep2, const SpinRep& rep3, cplx xi) {
  const ComplexMatrix i1 = identity(rep1.dim);
  const ComplexMatrix i2 = identity(rep2.dim);
  const ComplexMatrix i3 = identity(rep3.dim);

  const ComplexMatrix f12 = universal_twist(rep1, rep2, xi);
  const ComplexMatrix f23 = universal_twist(rep2, rep3, xi);
  const ComplexMatrix delta_h = kron(rep1.h, i2) + kron(i1, rep2.h);
  const ComplexMatrix delta_e = kron(rep2.e, i3) + kron(i2, rep3.e);

  const ComplexMatrix lhs = kron(f12, i3) * twist_from(delta_h, rep3.e, xi);
  const ComplexMatrix rhs = kron(i1, f23) * twist_from(rep1.h, delta_e, xi);
  return relative_residual(lhs, rhs);
}

namespace {
const ComplexMatrix& pick(const SpinRep& rep, Generator g) {
  switch (g) {
    case Generator::h: return rep.h;
    case Generator::e: return rep.e;
    case Generator::f: return rep.f;
  }
  return rep.h;
}
}  // namespace

ComplexMatrix primitive_coproduct(const SpinRep& rep1, const SpinRep& rep2, Generator g) {
  return kron(pick(rep1, g), identity(rep2.dim)) + kron(identity(rep1.dim), pick(rep2, g));
}

ComplexMatrix twisted_coproduct(const SpinRep& rep1, const SpinRep& rep2, Generator g, cplx xi) {
  return universal_twist(rep1, rep2, xi) * primitive_coproduct(rep1, rep2, g) *
         universal_twist_inverse(rep1, rep2, xi);
}

double twisted_sigma_primitivity(const SpinRep& rep1, const SpinRep& rep2, cplx xi) {
  const ComplexMatrix delta_e = primitive_coproduct(rep1, rep2, Generator::e);
  const ComplexMatrix twisted = universal_twist(rep1, rep2, xi) * sigma_of(delta_e, xi) *
                                universal_twist_inverse(rep1, rep2, xi);
  const ComplexMatrix primitive = kron(sigma_element(rep1, xi), identity(rep2.dim)) +
                                  kron(identity(rep1.dim), sigma_element(rep2, xi));
  return relative_residual(twisted, primitive);
}

}  // namespace twistlab
