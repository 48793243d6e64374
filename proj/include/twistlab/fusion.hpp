#pragma once

// Fused transfer matrices with spin-1 and spin-3/2 auxiliary spaces.
//
// Level l uses l fundamental auxiliary spaces with spectral parameters
// u, u−η, ..., u−(l−1)η. The monodromy product T_a1(u) T_a2(u−η) ... leaves
// the twisted symmetric subspace (the intersection of the images of P₊(ξ)
// on neighbouring pairs) invariant, and the fused transfer matrix is the
// trace over that subspace.

#include "twistlab/chain.hpp"

namespace twistlab {

inline constexpr int kMaxFusionLevel = 3;

/// Orthonormal basis (columns) of the fused auxiliary subspace of
/// (C^2)^{⊗level}; dimension level + 1.
ComplexMatrix fused_subspace(int level, cplx xi);

/// Trace over the fused subspace without normalisation. Level 0 is I and
/// level 1 is t(u).
ComplexMatrix fused_transfer_standard(const ChainSpec& spec, int level, cplx u);

/// Relative residual of M·K ⊆ K for the level's product monodromy, measured
/// as ‖(I − Π) M Π‖ / ‖M Π‖ summed over quantum blocks.
double fused_invariance_residual(const ChainSpec& spec, int level, cplx u);

/// Scalars that make the displayed recursion
///   t(l+1)(u) = t(l)(u) t(u−η) + (u−η)^N t(l−1)(u)
/// hold for a single site at ξ = 0. Every level's factor is a per-site
/// scalar raised to the power N.
struct FusionNormalization {
  cplx quantum_determinant{0.0};  // per site: t(u)t(u−η) − t(2)(u) at N = 1
  cplx level0{0.0};               // per site, before the overall sign
  cplx level3{0.0};               // per site least-squares factor for t(3)
};

FusionNormalization calibrate_fusion(cplx u, cplx eta);

/// Normalised fused transfer matrix used in the displayed recursion:
/// level 0 is −(q/(u−η))^N·I with q the per-site quantum determinant,
/// levels 1 and 2 are unscaled, level 3 carries level3^N.
ComplexMatrix fused_transfer(const ChainSpec& spec, int level, cplx u);

/// Relative residual of the displayed recursion at level l ∈ {1, 2}.
double verify_fusion_relation(const ChainSpec& spec, int level, cplx u);

/// Smallest relative residual of the displayed recursion at level l when the
/// left-hand side may carry any complex scalar, fitted at this (N, ξ, u).
double fusion_relation_best_scalar(const ChainSpec& spec, int level, cplx u);

/// Relative residual of the determinant-form recursion
///   l = 1: t(2)(u) = t(u)t(u−η) − q(u),
///   l = 2: t(3)(u) = t(2)(u)t(u−2η) − q(u−η)t(u),
/// with q(u) = ((u−2η)/(u−η))^N, on unnormalised fused matrices.
double verify_standard_recursion(const ChainSpec& spec, int level, cplx u);

/// max(‖P₊² − P₊‖, ‖[P₊, P·R(η)]‖) for the twisted projector.
double projector_consistency(cplx xi, cplx eta);

}  // namespace twistlab
