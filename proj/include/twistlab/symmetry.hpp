#pragma once

// Large-u expansion of the monodromy, T(u) = T0 + T1/u + O(1/u^2), with
// T0 = Π_k R_ak(ξ) = [[E, 0], [G, E⁻¹]], and the algebra of E and G.

#include <string>
#include <vector>

#include "twistlab/chain.hpp"
#include "twistlab/report.hpp"

namespace twistlab {

struct AsymptoticData {
  ComplexMatrix e;      // upper-left block of T0
  ComplexMatrix g;      // lower-left block
  ComplexMatrix e_inv;  // lower-right block
  double zero_block_residual = 0.0;  // ‖upper-right block‖
  double inverse_residual = 0.0;     // ‖E·E_inv − I‖
  MonodromyBlocks order1;            // coefficient of 1/u
};

AsymptoticData extract_t0(const ChainSpec& spec);

/// Readings of the 1/u coefficient built from ordered products
///   Σ_k (Π_{m>k} R_am(ξ)) P_ak (Π_{m<k} R_am(ξ)),
/// with and without the factor −η, and the literal index pattern
///   Σ_k M_k P_ak M_{N−k−1},  M_j = Π_{m=1}^{j−1} R_am(ξ).
enum class Order1Reading { ordered_with_eta, ordered, literal };

const char* to_string(Order1Reading r);

MonodromyBlocks order1_reading(const ChainSpec& spec, Order1Reading reading);

/// Relative residual of a reading against the exact 1/u coefficient.
double order1_residual(const ChainSpec& spec, Order1Reading reading);

struct SymmetryRelation {
  std::string id;
  std::string text;
};

/// The displayed E/G relations, with both written forms of E·C(u).
const std::vector<SymmetryRelation>& symmetry_relations();

/// One report per displayed relation at spectral parameter u.
std::vector<VerificationReport> verify_symmetry_relations(const ChainSpec& spec, cplx u,
                                                          double tolerance = 1e-11);

/// ‖[E, t(u)]‖ / ‖E t(u)‖.
double e_transfer_commutator(const ChainSpec& spec, cplx u);

/// ‖(E − I)^(N+1)‖.
double unipotency_residual(const ChainSpec& spec);

struct CoproductResiduals {
  double e = 0.0;          // E_{n1+n2} against E_{n1} ⊗ E_{n2}
  double g = 0.0;          // G against the matching factor order
  double g_swapped = 0.0;  // G against the other factor order
};

/// Coproduct identities on a chain of n1 + n2 sites split into sites 1..n1
/// (leftmost tensor factor) and n1+1..n1+n2. The displayed
/// Δ(G) = G⊗E + E⁻¹⊗G holds with Δ's left factor on the later segment,
/// i.e. G_{n1+n2} = E_{n1} ⊗ G_{n2} + G_{n1} ⊗ E_{n2}⁻¹ in Kronecker order.
CoproductResiduals coproduct_residuals(int n1, int n2, cplx xi);

VerificationReport verify_coproducts(int n1, int n2, cplx xi, double tolerance = 1e-12);

}  // namespace twistlab
