#pragma once

// Bethe roots of the XXX chain (the twist does not change the equations),
// transfer-matrix eigenvalues built from them and the vector identities of
// the algebraic Bethe ansatz.

#include <vector>

#include "twistlab/chain.hpp"
#include "twistlab/report.hpp"

namespace twistlab {

struct BetheState {
  int n_sites = 0;
  int magnons = 0;
  std::vector<cplx> roots;
  double residual = 0.0;  // largest per-root defect
  cplx eta{1.0};
};

/// Per-root defect of N·log((v_j−η)/v_j) − Σ'_k log((v_k−v_j+η)/(v_k−v_j−η)),
/// reduced modulo 2πi. Throws DomainError on coincident roots or poles.
std::vector<double> bethe_defect(const BetheState& state);

struct BetheSolverOptions {
  int max_iterations = 200;
  int max_halvings = 8;
  double tolerance = 1e-12;
  double min_separation = 1e-8;
  double escape_radius = 1e6;
};

/// Damped Newton on the logarithmic equations from `seeds` (one per magnon).
/// A collision or pole hit restarts once from perturbed seeds. Throws
/// ConvergenceError with the last iterate on failure.
BetheState solve_bethe(int n_sites, int magnons, cplx eta, const std::vector<cplx>& seeds,
                       const BetheSolverOptions& options = {});

/// v = η/(1 − ω) for the N−1 roots of unity ω ≠ 1, ordered by arg ω.
std::vector<cplx> one_magnon_roots(int n_sites, cplx eta);

/// Pairs of one-magnon roots followed by the string seeds r ± iη/2.
std::vector<std::vector<cplx>> two_magnon_seeds(int n_sites, cplx eta);

/// Solves from every two-magnon seed and keeps distinct converged root sets,
/// in seed order.
std::vector<BetheState> solve_two_magnon(int n_sites, cplx eta,
                                         const BetheSolverOptions& options = {});

/// Λ(u) = Π_j α(u, v_j) + d(u) Π_j α(v_j, u).
cplx eval_lambda(cplx u, const BetheState& state);

/// Q(u) = Π_j (u − v_j).
cplx q_function(cplx u, const BetheState& state);

/// |Λ(u)Q(u) − Q(u−η) − d(u)Q(u+η)| / max(|Λ(u)Q(u)|, 1).
double verify_tq(const BetheState& state, cplx u);

/// Residue of Λ at u = v_j by a trapezoid rule on a small circle; vanishes
/// when the Bethe equations hold.
cplx lambda_residue(const BetheState& state, int root_index, double radius = 1e-3, int points = 64);

/// C(v_1) ... C(v_M) Ω.
ComplexVector bethe_vector(const ChainSpec& spec, const std::vector<cplx>& roots);

/// Relative defect of t(u)C(v)Ω against the three-term right-hand side
/// (α(u,v) + d(u)α(v,u))C(v)Ω − (β(u,v) + β(v,u)d(v))C(u)Ω + ξ(1−d(u))(1−d(v))Ω.
double verify_one_magnon_action(const ChainSpec& spec, cplx u, cplx v);

/// Relative defect ‖t(u)Ψ − Λ(u)Ψ‖ / ‖Λ(u)Ψ‖ for Ψ = C(v_1)...C(v_M)Ω.
double eigenvector_defect(const ChainSpec& spec, const BetheState& state, cplx u);

struct MultiMagnonReports {
  VerificationReport eigenvalue;   // Λ within tolerance of the exact t_ξ(u) spectrum
  VerificationReport eigenvector;  // expected failure for M >= 2 and ξ != 0
};

/// Both sub-checks over `states`. At ξ != 0 with some M >= 2 state, the
/// eigenvector check passes when every M >= 2 defect exceeds `floor`, the
/// same states at ξ = 0 have defect below `control_tol`, and states with
/// M <= 1 still have defect below `control_tol`.
MultiMagnonReports verify_multi_magnon_spectrum(const ChainSpec& spec,
                                                const std::vector<BetheState>& states, cplx u,
                                                double spectrum_tol = 1e-8, double floor = 1e-4,
                                                double control_tol = 1e-10);

struct SectorCount {
  int magnons = 0;
  int dimension = 0;  // states with `magnons` up spins
  int accounted = 0;  // exact eigenvalues matched by some Λ with M' <= magnons
};

/// Dimension accounting of the exact t(u) spectrum per magnon sector against
/// the eigenvalues of the given states (descendants included via M' <= M).
std::vector<SectorCount> sector_accounting(const ChainSpec& spec, const std::vector<BetheState>& states,
                                           cplx u, int max_magnons, double tol = 1e-8);

}  // namespace twistlab
