#pragma once

// sl(2) representations and the Jordanian twist F = exp(h ⊗ σ/2),
// with 1 − 2ξe = exp(−σ).

#include "twistlab/tensor.hpp"

namespace twistlab {

/// Deformation parameter ξ and Yangian parameter η.
struct TwistParams {
  cplx xi{0.0};
  cplx eta{1.0};

  /// Throws DomainError unless both are finite and η ≠ 0.
  void validate() const;
};

/// Irreducible spin-s representation in the basis m = s, s−1, ..., −s
/// (index 0 is the highest weight). Commutators: [h,e] = −2e, [h,f] = 2f,
/// [e,f] = −h. e lowers the weight and equals σ⁻ for s = 1/2.
struct SpinRep {
  double spin = 0.5;
  Eigen::Index dim = 2;
  ComplexMatrix h;
  ComplexMatrix e;
  ComplexMatrix f;
};

SpinRep make_spin_rep(double spin);

enum class Generator { h, e, f };

/// exp(x) for nilpotent x, summed until the powers vanish. Throws DomainError
/// if x is not nilpotent within dim steps.
ComplexMatrix nilpotent_exp(const ComplexMatrix& x);

/// σ = −log(1 − 2ξ·nil) for a nilpotent `nil`, by the terminating series.
ComplexMatrix sigma_of(const ComplexMatrix& nil, cplx xi);

/// σ element of the representation.
ComplexMatrix sigma_element(const SpinRep& rep, cplx xi);

/// exp(h ⊗ σ(e)/2) for arbitrary matrices h and nilpotent e; the building
/// block for evaluating the twist and its coproducts.
ComplexMatrix twist_from(const ComplexMatrix& h, const ComplexMatrix& e, cplx xi);

/// (rep1 ⊗ rep2) F in closed exponential form.
ComplexMatrix universal_twist(const SpinRep& rep1, const SpinRep& rep2, cplx xi);

/// Inverse twist exp(−h ⊗ σ/2).
ComplexMatrix universal_twist_inverse(const SpinRep& rep1, const SpinRep& rep2, cplx xi);

/// (rep1 ⊗ rep2) F by the series Σ_k ξ^k/k! · h(h+2)...(h+2k−2) ⊗ e^k.
ComplexMatrix universal_twist_series(const SpinRep& rep1, const SpinRep& rep2, cplx xi);

/// Relative residual of (F12 ⊗ 1)(Δ⊗id)F − (1 ⊗ F23)(id⊗Δ)F on rep1⊗rep2⊗rep3,
/// with Δ the undeformed (primitive) coproduct applied before representing.
double verify_cocycle(const SpinRep& rep1, const SpinRep& rep2, const SpinRep& rep3, cplx xi);

/// Undeformed coproduct x ⊗ 1 + 1 ⊗ x of a generator.
ComplexMatrix primitive_coproduct(const SpinRep& rep1, const SpinRep& rep2, Generator g);

/// Δ_ξ(x) = F Δ(x) F⁻¹ on rep1 ⊗ rep2.
ComplexMatrix twisted_coproduct(const SpinRep& rep1, const SpinRep& rep2, Generator g, cplx xi);

/// Residual of F·σ(Δe)·F⁻¹ − (σ ⊗ 1 + 1 ⊗ σ): after twisting, σ is primitive.
double twisted_sigma_primitivity(const SpinRep& rep1, const SpinRep& rep2, cplx xi);

}  // namespace twistlab
