#pragma once

// Monodromy and transfer matrices of the twisted XXX chain, the deformed
// Hamiltonian and the checks that tie them together.
//
// The monodromy is T(u) = L_N(u) ... L_1(u) with L_k(u) = R(u) acting on
// auxiliary ⊗ site k (auxiliary = left factor of R). Its blocks are read on
// the auxiliary space as
//
//   T(u) = [[A(u), B(u)], [C(u), D(u)]],  A = <0|T|0>, B = <0|T|1>, ...
//
// so that on the all-down vacuum Ω: A Ω = Ω, D Ω = (1 − η/u)^N Ω, B Ω = 0.

#include <array>
#include <string>
#include <vector>

#include "twistlab/report.hpp"
#include "twistlab/tensor.hpp"
#include "twistlab/twist.hpp"

namespace twistlab {

enum class Boundary { periodic, open };

const char* to_string(Boundary b);

struct ChainSpec {
  int n_sites = 2;
  TwistParams params;
  Boundary boundary = Boundary::periodic;

  /// Throws DomainError unless 1 <= n_sites <= kMaxSites and params are valid.
  void validate() const;
  Eigen::Index dim() const { return Eigen::Index{1} << n_sites; }
};

/// rational: L(u) = R_ξ − (η/u)P, pole at u = 0.
/// polynomial: L(u) = u R_ξ − ηP = u·(rational), regular everywhere.
enum class LForm { rational, polynomial };

struct MonodromyBlocks {
  ComplexMatrix a, b, c, d;
  cplx u{0.0};

  const ComplexMatrix& block(int i, int j) const;
  ComplexMatrix& block(int i, int j);
};

/// α(u,v) = 1 − η/(u−v).
cplx alpha(cplx u, cplx v, cplx eta);
/// β(u,v) = α(u,v) − 1 = −η/(u−v).
cplx beta(cplx u, cplx v, cplx eta);
/// Vacuum eigenvalue of D: d(u) = (1 − η/u)^N.
cplx vacuum_d(cplx u, int n_sites, cplx eta);

/// L_k · T for a 4x4 local operator L acting on auxiliary ⊗ site k.
MonodromyBlocks left_multiply_local(const ComplexMatrix& local, int site, int n_sites,
                                    const MonodromyBlocks& t);

/// Blocks of the identity on auxiliary ⊗ (C^2)^N.
MonodromyBlocks identity_monodromy(int n_sites);

/// Product of a 4x4 local operator over sites N..1 (auxiliary first).
MonodromyBlocks monodromy_from_local(const ComplexMatrix& local, int n_sites);

/// Blocks of T and of dT/du for a local operator linear in u,
/// L(u) = u·slope + offset, evaluated at u = 0.
struct MonodromyJet {
  MonodromyBlocks value;
  MonodromyBlocks derivative;
};
MonodromyJet monodromy_jet_at_zero(const ComplexMatrix& slope, const ComplexMatrix& offset,
                                   int n_sites);

MonodromyBlocks build_monodromy(const ChainSpec& spec, cplx u, LForm form = LForm::rational);

ComplexMatrix transfer_matrix(const ChainSpec& spec, cplx u, LForm form = LForm::rational);

/// Relative residual of R(u−v) T_1(u) T_2(v) − T_2(v) T_1(u) R(u−v), both
/// sides assembled as 4x4 arrays of 2^N operators.
double verify_rtt(const ChainSpec& spec, cplx u, cplx v);

/// The same identity split into its 16 auxiliary components; entry
/// [2*i1+i2][2*j1+j2] is the relative residual of that component.
std::array<std::array<double, 4>, 4> rtt_components(const ChainSpec& spec, cplx u, cplx v);

struct CommutationRelation {
  std::string id;
  std::string text;
  /// Alternative transcription worth reporting when `text` fails; may be empty.
  std::string candidate;
};

/// The fourteen displayed A/B/C/D exchange relations, verbatim.
const std::vector<CommutationRelation>& commutation_relations();

/// One report per displayed relation at (u, v). A relation that divides by a
/// vanishing α is reported as an observation and skipped.
std::vector<VerificationReport> verify_commutation_relations(const ChainSpec& spec, cplx u, cplx v,
                                                             double tolerance = 1e-12);

/// transfer_consistent: σ·σ + 2ξ²σ⁻σ⁻ + 2ξ(σ⁻_n − σ⁻_{n+1}) per bond, the
/// density produced by the logarithmic derivative of t(u).
/// printed: the same terms with unit coefficients on the ξ parts.
enum class HamiltonianReading { transfer_consistent, printed };

struct HamiltonianOptions {
  HamiltonianReading reading = HamiltonianReading::transfer_consistent;
  /// Use σʸ_n σʸ_n on each bond instead of σʸ_n σʸ_{n+1}.
  bool literal_sigma_y = false;
};

/// Sum over bonds (n, n+1); periodic wraps N → 1, open stops at N−1.
ComplexMatrix build_hamiltonian(const ChainSpec& spec, HamiltonianOptions options = {});

enum class DerivativeMethod { exact, central_difference };

struct HamiltonianPair {
  ComplexMatrix h_model;
  ComplexMatrix h_log;
  cplx scale_a{0.0};
  cplx shift_b{0.0};
  /// ‖h_log − a·h_model − b·I‖ / ‖h_log‖.
  double fit_residual = 0.0;
};

/// t(0)⁻¹ t'(0) from the polynomial form, fitted affinely to build_hamiltonian.
/// Periodic boundary only. Throws DecompositionError if t(0) is singular.
HamiltonianPair extract_hamiltonian(const ChainSpec& spec, HamiltonianOptions options = {},
                                    DerivativeMethod method = DerivativeMethod::exact,
                                    double step = 1e-5);

/// Largest |H_ij| with total σ^z(row) >= total σ^z(col): zero when `m` only
/// lowers the magnetisation.
double strictly_lowering_residual(const ComplexMatrix& m, int n_sites);

struct SpectrumCoincidence {
  SpectrumReport hamiltonian;              // H(ξ) against H(0)
  std::vector<SpectrumReport> transfer;    // t_ξ(u) against t_0(u), one per u
  bool matched = false;
};

SpectrumCoincidence verify_spectrum_coincidence(const ChainSpec& spec, const std::vector<cplx>& us,
                                                double hamiltonian_tol = 1e-8,
                                                double transfer_tol = 1e-7);

}  // namespace twistlab
