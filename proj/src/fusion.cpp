#include "twistlab/fusion.hpp"

#include <vector>

#include "twistlab/errors.hpp"
#include "twistlab/rmatrix.hpp"

namespace twistlab {

namespace {

void check_level(int level) {
  if (level < 0 || level > kMaxFusionLevel) {
    throw DomainError("fusion level must lie in [0, " + std::to_string(kMaxFusionLevel) + "]");
  }
}

// Right singular vectors of `constraints` with vanishing singular value.
ComplexMatrix null_space(const ComplexMatrix& constraints) {
  Eigen::JacobiSVD<ComplexMatrix> svd(constraints, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cutoff = 1e-10 * std::max(1.0, s.size() > 0 ? s(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > cutoff) ++rank;
  return svd.matrixV().rightCols(constraints.cols() - rank);
}

// Operator blocks of T_a1(u) T_a2(u−η) ... indexed by multi-indices of the
// auxiliary factors (a1 most significant).
std::vector<std::vector<ComplexMatrix>> product_blocks(const ChainSpec& spec, int level, cplx u) {
  std::vector<MonodromyBlocks> factors;
  for (int k = 0; k < level; ++k) {
    factors.push_back(build_monodromy(spec, u - static_cast<double>(k) * spec.params.eta));
  }
  const int size = 1 << level;
  std::vector<std::vector<ComplexMatrix>> out(static_cast<std::size_t>(size),
                                              std::vector<ComplexMatrix>(static_cast<std::size_t>(size)));
  for (int p = 0; p < size; ++p) {
    for (int q = 0; q < size; ++q) {
      ComplexMatrix acc = identity(spec.dim());
      for (int k = 0; k < level; ++k) {
        const int shift = level - 1 - k;
        acc = acc * factors[static_cast<std::size_t>(k)].block((p >> shift) & 1, (q >> shift) & 1);
      }
      out[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] = std::move(acc);
    }
  }
  return out;
}

}  // namespace

ComplexMatrix fused_subspace(int level, cplx xi) {
  check_level(level);
  if (level == 0) return ComplexMatrix::Ones(1, 1);
  if (level == 1) return identity(2);
  const ComplexMatrix minus = spectral_projectors(xi).minus;
  const Eigen::Index dim = Eigen::Index{1} << level;
  // One block of rows per neighbouring pair (j, j+1).
  std::vector<ComplexMatrix> rows;
  for (int j = 0; j + 1 < level; ++j) {
    rows.push_back(kron(kron(identity(Eigen::Index{1} << j), minus),
                        identity(Eigen::Index{1} << (level - 2 - j))));
  }
  ComplexMatrix constraints(static_cast<Eigen::Index>(rows.size()) * dim, dim);
  for (std::size_t j = 0; j < rows.size(); ++j) {
    constraints.middleRows(static_cast<Eigen::Index>(j) * dim, dim) = rows[j];
  }
  ComplexMatrix basis = null_space(constraints);
  if (basis.cols() != level + 1) {
    throw DecompositionError("fused_subspace: unexpected dimension " + std::to_string(basis.cols()));
  }
  return basis;
}

ComplexMatrix fused_transfer_standard(const ChainSpec& spec, int level, cplx u) {
  check_level(level);
  spec.validate();
  if (level == 0) return identity(spec.dim());
  if (level == 1) return transfer_matrix(spec, u);

  const ComplexMatrix basis = fused_subspace(level, spec.params.xi);
  const ComplexMatrix proj = basis * basis.adjoint();
  const auto blocks = product_blocks(spec, level, u);
  ComplexMatrix out = ComplexMatrix::Zero(spec.dim(), spec.dim());
  for (Eigen::Index p = 0; p < proj.rows(); ++p) {
    for (Eigen::Index q = 0; q < proj.cols(); ++q) {
      // tr(Π M) = Σ_{p,q} Π(q,p) M(p,q).
      const cplx w = proj(q, p);
      if (std::abs(w) < 1e-15) continue;
      out += w * blocks[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)];
    }
  }
  return out;
}

double fused_invariance_residual(const ChainSpec& spec, int level, cplx u) {
  check_level(level);
  if (level < 2) return 0.0;
  const ComplexMatrix basis = fused_subspace(level, spec.params.xi);
  const ComplexMatrix proj = basis * basis.adjoint();
  const Eigen::Index size = proj.rows();
  const Eigen::Index dim = spec.dim();
  const auto blocks = product_blocks(spec, level, u);

  ComplexMatrix m(size * dim, size * dim);
  for (Eigen::Index p = 0; p < size; ++p) {
    for (Eigen::Index q = 0; q < size; ++q) {
      m.block(p * dim, q * dim, dim, dim) = blocks[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)];
    }
  }
  const ComplexMatrix big_proj = kron(proj, identity(dim));
  const ComplexMatrix image = m * big_proj;
  const double scale = image.norm();
  return scale > 0.0 ? (image - big_proj * image).norm() / scale : 0.0;
}

FusionNormalization calibrate_fusion(cplx u, cplx eta) {
  ChainSpec single;
  single.n_sites = 1;
  single.params.eta = eta;
  const ComplexMatrix t_u = transfer_matrix(single, u);
  const ComplexMatrix t_shift = transfer_matrix(single, u - eta);
  const ComplexMatrix t2 = fused_transfer_standard(single, 2, u);

  FusionNormalization n;
  n.quantum_determinant = (t_u * t_shift - t2).trace() / 2.0;
  n.level0 = n.quantum_determinant / (u - eta);

  // Least-squares c with c·t(3)(u) ≈ t(2)(u)t(u−η) + (u−η)t(u) at one site.
  const ComplexMatrix t3 = fused_transfer_standard(single, 3, u);
  const ComplexMatrix target = t2 * t_shift + (u - eta) * t_u;
  const cplx denom = (t3.adjoint() * t3).trace();
  n.level3 = std::abs(denom) > 0.0 ? (t3.adjoint() * target).trace() / denom : cplx{1.0};
  return n;
}

ComplexMatrix fused_transfer(const ChainSpec& spec, int level, cplx u) {
  check_level(level);
  spec.validate();
  const int n = spec.n_sites;
  switch (level) {
    case 0: {
      const FusionNormalization c = calibrate_fusion(u, spec.params.eta);
      return -std::pow(c.level0, n) * identity(spec.dim());
    }
    case 1: return transfer_matrix(spec, u);
    case 2: return fused_transfer_standard(spec, 2, u);
    default: {
      const FusionNormalization c = calibrate_fusion(u, spec.params.eta);
      return std::pow(c.level3, n) * fused_transfer_standard(spec, 3, u);
    }
  }
}

double verify_fusion_relation(const ChainSpec& spec, int level, cplx u) {
  if (level < 1 || level + 1 > kMaxFusionLevel) {
    throw DomainError("verify_fusion_relation: level must be 1 or 2");
  }
  const cplx eta = spec.params.eta;
  const ComplexMatrix lhs = fused_transfer(spec, level + 1, u);
  const ComplexMatrix rhs = fused_transfer(spec, level, u) * transfer_matrix(spec, u - eta) +
                            std::pow(u - eta, spec.n_sites) * fused_transfer(spec, level - 1, u);
  return relative_residual(lhs, rhs);
}

double fusion_relation_best_scalar(const ChainSpec& spec, int level, cplx u) {
  if (level < 1 || level + 1 > kMaxFusionLevel) {
    throw DomainError("fusion_relation_best_scalar: level must be 1 or 2");
  }
  const cplx eta = spec.params.eta;
  const ComplexMatrix lhs = fused_transfer(spec, level + 1, u);
  const ComplexMatrix rhs = fused_transfer(spec, level, u) * transfer_matrix(spec, u - eta) +
                            std::pow(u - eta, spec.n_sites) * fused_transfer(spec, level - 1, u);
  const cplx denom = (lhs.adjoint() * lhs).trace();
  if (std::abs(denom) == 0.0) return relative_residual(lhs, rhs);
  const cplx c = (lhs.adjoint() * rhs).trace() / denom;
  return relative_residual(c * lhs, rhs);
}

double verify_standard_recursion(const ChainSpec& spec, int level, cplx u) {
  const cplx eta = spec.params.eta;
  const int n = spec.n_sites;
  const auto qdet = [&](cplx z) { return std::pow((z - 2.0 * eta) / (z - eta), n); };
  if (level == 1) {
    const ComplexMatrix lhs = fused_transfer_standard(spec, 2, u);
    const ComplexMatrix rhs = transfer_matrix(spec, u) * transfer_matrix(spec, u - eta) -
                              qdet(u) * identity(spec.dim());
    return relative_residual(lhs, rhs);
  }
  if (level == 2) {
    const ComplexMatrix lhs = fused_transfer_standard(spec, 3, u);
    const ComplexMatrix rhs =
        fused_transfer_standard(spec, 2, u) * transfer_matrix(spec, u - 2.0 * eta) -
        qdet(u - eta) * transfer_matrix(spec, u);
    return relative_residual(lhs, rhs);
  }
  throw DomainError("verify_standard_recursion: level must be 1 or 2");
}

double projector_consistency(cplx xi, cplx eta) {
  const ComplexMatrix plus = spectral_projectors(xi).plus;
  TwistParams params{xi, eta};
  const ComplexMatrix r_check = permutation_op() * build_r(eta, params);
  return std::max((plus * plus - plus).norm(), commutator(plus, r_check).norm());
}

}  // namespace twistlab
