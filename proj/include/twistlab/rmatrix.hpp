#pragma once

// The twisted rational R-matrix R(u) = R_ξ − (η/u)P = F21 (I − (η/u)P) F12⁻¹
// on C^2 ⊗ C^2, and its structural checks.

#include <utility>

#include "twistlab/tensor.hpp"
#include "twistlab/twist.hpp"

namespace twistlab {

/// F12 = [[1,0,0,0],[ξ,1,0,0],[0,0,1,0],[0,0,−ξ,1]].
ComplexMatrix build_f12(cplx xi);

/// F21 = P F12 P.
ComplexMatrix build_f21(cplx xi);

/// R_ξ as the displayed entry table [[1,0,0,0],[−ξ,1,0,0],[ξ,0,1,0],[ξ²,−ξ,ξ,1]].
ComplexMatrix build_r_xi(cplx xi);

/// R_ξ computed as F21 · F12⁻¹.
ComplexMatrix build_r_xi_product(cplx xi);

/// R(u) = R_ξ − (η/u)P. Throws DomainError at the pole u = 0.
ComplexMatrix build_r(cplx u, const TwistParams& params);

/// R(u) via the twisted form F21 (I − (η/u)P) F12⁻¹.
ComplexMatrix build_r_twisted(cplx u, const TwistParams& params);

/// Polynomial normalisation Ľ(u) = u R_ξ − ηP = u R(u); regular at u = 0.
ComplexMatrix build_r_poly(cplx u, const TwistParams& params);

/// Relative residual of R12(u−v) R13(u) R23(v) − R23(v) R13(u) R12(u−v).
double verify_ybe(cplx u, cplx v, const TwistParams& params);

struct RegularityReport {
  double normalized_residual = 0.0;  // ‖Ľ(0)/(−η) − P‖
  double polynomial_residual = 0.0;  // ‖Ľ(0) − (−η)P‖
};

RegularityReport verify_regularity(const TwistParams& params);

struct SpectralProjectors {
  ComplexMatrix plus;
  ComplexMatrix minus;
};

/// P±(ξ) = F12 P±(0) F12⁻¹ with P±(0) = (I ± P)/2.
SpectralProjectors spectral_projectors(cplx xi);

struct UnitarityProbe {
  ComplexMatrix product;       // R12(u) R21(−u)
  cplx scalar{0.0};            // best scalar fit tr(product)/4
  double deviation = 0.0;      // relative distance of the product from scalar·I
};

/// Measures how far R12(u)R21(−u) is from a multiple of the identity.
UnitarityProbe probe_unitarity(cplx u, const TwistParams& params);

}  // namespace twistlab
