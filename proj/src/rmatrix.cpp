#include "twistlab/rmatrix.hpp"

#include "twistlab/errors.hpp"

namespace twistlab {

ComplexMatrix build_f12(cplx xi) {
  return matrix_from_rows({{1.0, 0.0, 0.0, 0.0},
                           {xi, 1.0, 0.0, 0.0},
                           {0.0, 0.0, 1.0, 0.0},
                           {0.0, 0.0, -xi, 1.0}});
}

ComplexMatrix build_f21(cplx xi) {
  const ComplexMatrix p = permutation_op();
  return p * build_f12(xi) * p;
}

ComplexMatrix build_r_xi(cplx xi) {
  return matrix_from_rows({{1.0, 0.0, 0.0, 0.0},
                           {-xi, 1.0, 0.0, 0.0},
                           {xi, 0.0, 1.0, 0.0},
                           {xi * xi, -xi, xi, 1.0}});
}

ComplexMatrix build_r_xi_product(cplx xi) {
  // F12 is unit lower-triangular, so its inverse is F12(−ξ).
  return build_f21(xi) * build_f12(xi).inverse();
}

ComplexMatrix build_r(cplx u, const TwistParams& params) {
  params.validate();
  if (u == cplx{}) throw DomainError("build_r: pole at u = 0");
  return build_r_xi(params.xi) - (params.eta / u) * permutation_op();
}

ComplexMatrix build_r_twisted(cplx u, const TwistParams& params) {
  params.validate();
  if (u == cplx{}) throw DomainError("build_r_twisted: pole at u = 0");
  const ComplexMatrix yang = identity(4) - (params.eta / u) * permutation_op();
  return build_f21(params.xi) * yang * build_f12(params.xi).inverse();
}

ComplexMatrix build_r_poly(cplx u, const TwistParams& params) {
  params.validate();
  return u * build_r_xi(params.xi) - params.eta * permutation_op();
}

double verify_ybe(cplx u, cplx v, const TwistParams& params) {
  if (u == cplx{} || v == cplx{} || u == v) throw DomainError("verify_ybe: pole argument");
  const ComplexMatrix r12 = embed_pair(build_r(u - v, params), 1, 2, 3);
  const ComplexMatrix r13 = embed_pair(build_r(u, params), 1, 3, 3);
  const ComplexMatrix r23 = embed_pair(build_r(v, params), 2, 3, 3);
  return relative_residual(r12 * r13 * r23, r23 * r13 * r12);
}

RegularityReport verify_regularity(const TwistParams& params) {
  params.validate();
  const ComplexMatrix p = permutation_op();
  const ComplexMatrix at_zero = build_r_poly(0.0, params);
  RegularityReport report;
  report.normalized_residual = (at_zero / (-params.eta) - p).norm();
  report.polynomial_residual = (at_zero + params.eta * p).norm();
  return report;
}

SpectralProjectors spectral_projectors(cplx xi) {
  const ComplexMatrix p = permutation_op();
  const ComplexMatrix f = build_f12(xi);
  const ComplexMatrix f_inv = f.inverse();
  return {f * (0.5 * (identity(4) + p)) * f_inv, f * (0.5 * (identity(4) - p)) * f_inv};
}

UnitarityProbe probe_unitarity(cplx u, const TwistParams& params) {
  const ComplexMatrix p = permutation_op();
  UnitarityProbe probe;
  probe.product = build_r(u, params) * (p * build_r(-u, params) * p);
  probe.scalar = probe.product.trace() / 4.0;
  probe.deviation = relative_residual(probe.product, probe.scalar * identity(4));
  return probe;
}

}  // namespace twistlab
