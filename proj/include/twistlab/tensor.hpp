#pragma once

// Dense complex linear algebra on tensor-product spaces of spin-1/2 sites.
//
// Conventions used across the library:
//   * |0> = (1,0)^T is spin up, |1> = (0,1)^T is spin down.
//   * Tensor factor 1 is the leftmost factor of a Kronecker product, so the
//     basis index of |b_1 b_2 ... b_n> is the binary number b_1 b_2 ... b_n.

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace twistlab {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Spectrum = std::vector<cplx>;

/// Largest chain handled by the dense constructions (2^12 = 4096).
inline constexpr int kMaxSites = 12;

/// Builds a matrix from nested rows; rejects ragged input and non-finite entries.
ComplexMatrix matrix_from_rows(std::initializer_list<std::initializer_list<cplx>> rows);

bool all_finite(const ComplexMatrix& m);

ComplexMatrix identity(Eigen::Index dim);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// I ⊗ ... ⊗ op ⊗ ... ⊗ I with the 2x2 `op` on factor `site` (1-based).
ComplexMatrix embed_at_site(const ComplexMatrix& op, int site, int n_sites);

/// Embeds a 4x4 two-factor operator acting on factors (`first`, `second`) of an
/// n-fold product of C^2. `first` receives the operator's left tensor factor;
/// the two positions need not be adjacent or ordered.
ComplexMatrix embed_pair(const ComplexMatrix& op, int first, int second, int n_factors);

/// In-place (I ⊗ ... ⊗ op ⊗ ... ⊗ I) * m without forming the embedded operator.
void apply_site_left(const ComplexMatrix& op, int site, int n_sites, ComplexMatrix& m);

/// The swap P(x ⊗ y) = y ⊗ x on C^2 ⊗ C^2.
ComplexMatrix permutation_op();

namespace pauli {
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
/// σ⁻ = (σˣ − iσʸ)/2; lowers |0> (up) to |1> (down).
ComplexMatrix minus();
ComplexMatrix plus();
}  // namespace pauli

/// Product state |b_1 ... b_n> for bits b_k in {0, 1}.
ComplexVector product_state(std::span<const int> bits);

/// The all-down reference state ⊗(0,1)^T.
ComplexVector all_down(int n_sites);

/// Total σ^z of the computational basis state with the given index.
int total_sz(Eigen::Index index, int n_sites);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// ‖lhs − rhs‖_F / max(‖lhs‖_F, ‖rhs‖_F); zero when both sides vanish.
double relative_residual(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

/// Groups of indices forming the irreducible diagonal blocks of `m` under the
/// exact zero pattern (strongly connected components of the adjacency graph).
/// Blocks are returned in a topological order, so permuting `m` by their
/// concatenation yields a block-triangular matrix.
std::vector<std::vector<Eigen::Index>> irreducible_blocks(const ComplexMatrix& m);

/// Full eigenvalue multiset of a general complex matrix. The matrix is first
/// reduced to block-triangular form by its exact zero pattern and each
/// irreducible block is diagonalised by complex QR. Deterministic.
Spectrum eigenvalues(const ComplexMatrix& m);

/// Complex QR on the whole matrix with no structural reduction.
Spectrum eigenvalues_dense(const ComplexMatrix& m);

struct SpectrumReport {
  Spectrum eigenvalues;
  bool matched = false;
  double max_pair_distance = 0.0;
};

/// Pairs two eigenvalue multisets: lexicographic (Re, Im) sort and greedy
/// pairing first, then an optimal bottleneck assignment if the greedy pairing
/// leaves a pair farther apart than `tol`.
SpectrumReport match_spectra(Spectrum s1, Spectrum s2, double tol);

/// Smallest distance from `value` to any element of `spectrum`.
double distance_to_spectrum(cplx value, const Spectrum& spectrum);

}  // namespace twistlab
