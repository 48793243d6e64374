#include "twistlab/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "twistlab/errors.hpp"

namespace twistlab {

ComplexMatrix matrix_from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
  if (rows.size() == 0 || rows.begin()->size() == 0) {
    throw DomainError("matrix_from_rows: empty matrix");
  }
  const auto n_cols = static_cast<Eigen::Index>(rows.begin()->size());
  ComplexMatrix m(static_cast<Eigen::Index>(rows.size()), n_cols);
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    if (static_cast<Eigen::Index>(row.size()) != n_cols) {
      throw DomainError("matrix_from_rows: ragged rows");
    }
    Eigen::Index c = 0;
    for (const auto& value : row) m(r, c++) = value;
    ++r;
  }
  if (!all_finite(m)) throw DomainError("matrix_from_rows: non-finite entry");
  return m;
}

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    }
  }
  return true;
}

ComplexMatrix identity(Eigen::Index dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

namespace {

void check_site(int site, int n_sites, const char* who) {
  if (n_sites < 1 || n_sites > kMaxSites + 2) {
    throw DomainError(std::string(who) + ": unsupported number of factors");
  }
  if (site < 1 || site > n_sites) {
    throw DomainError(std::string(who) + ": site out of range");
  }
}

void check_single_site_op(const ComplexMatrix& op, const char* who) {
  if (op.rows() != 2 || op.cols() != 2) {
    throw DomainError(std::string(who) + ": operator must be 2x2");
  }
}

}  // namespace

ComplexMatrix embed_at_site(const ComplexMatrix& op, int site, int n_sites) {
  check_site(site, n_sites, "embed_at_site");
  check_single_site_op(op, "embed_at_site");
  const Eigen::Index left = Eigen::Index{1} << (site - 1);
  const Eigen::Index right = Eigen::Index{1} << (n_sites - site);
  return kron(kron(identity(left), op), identity(right));
}

ComplexMatrix embed_pair(const ComplexMatrix& op, int first, int second, int n_factors) {
  check_site(first, n_factors, "embed_pair");
  check_site(second, n_factors, "embed_pair");
  if (first == second) throw DomainError("embed_pair: factors must differ");
  if (op.rows() != 4 || op.cols() != 4) throw DomainError("embed_pair: operator must be 4x4");

  const Eigen::Index dim = Eigen::Index{1} << n_factors;
  const int shift_first = n_factors - first;
  const int shift_second = n_factors - second;
  const Eigen::Index mask = (Eigen::Index{1} << shift_first) | (Eigen::Index{1} << shift_second);

  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const Eigen::Index in = 2 * ((col >> shift_first) & 1) + ((col >> shift_second) & 1);
    const Eigen::Index rest = col & ~mask;
    for (Eigen::Index o = 0; o < 4; ++o) {
      const cplx c = op(o, in);
      if (c == cplx{}) continue;
      const Eigen::Index row = rest | ((o >> 1) << shift_first) | ((o & 1) << shift_second);
      out(row, col) += c;
    }
  }
  return out;
}

void apply_site_left(const ComplexMatrix& op, int site, int n_sites, ComplexMatrix& m) {
  check_site(site, n_sites, "apply_site_left");
  check_single_site_op(op, "apply_site_left");
  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  if (m.rows() != dim) throw DomainError("apply_site_left: row dimension mismatch");

  const Eigen::Index bit = Eigen::Index{1} << (n_sites - site);
  for (Eigen::Index r0 = 0; r0 < dim; ++r0) {
    if (r0 & bit) continue;
    const Eigen::Index r1 = r0 | bit;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const cplx x0 = m(r0, c);
      const cplx x1 = m(r1, c);
      m(r0, c) = op(0, 0) * x0 + op(0, 1) * x1;
      m(r1, c) = op(1, 0) * x0 + op(1, 1) * x1;
    }
  }
}

ComplexMatrix permutation_op() {
  ComplexMatrix p = ComplexMatrix::Zero(4, 4);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) p(2 * i + j, 2 * j + i) = 1.0;
  }
  return p;
}

namespace pauli {
ComplexMatrix x() { return matrix_from_rows({{0.0, 1.0}, {1.0, 0.0}}); }
ComplexMatrix y() { return matrix_from_rows({{0.0, cplx{0.0, -1.0}}, {cplx{0.0, 1.0}, 0.0}}); }
ComplexMatrix z() { return matrix_from_rows({{1.0, 0.0}, {0.0, -1.0}}); }
ComplexMatrix minus() { return matrix_from_rows({{0.0, 0.0}, {1.0, 0.0}}); }
ComplexMatrix plus() { return matrix_from_rows({{0.0, 1.0}, {0.0, 0.0}}); }
}  // namespace pauli

ComplexVector product_state(std::span<const int> bits) {
  if (bits.empty()) throw DomainError("product_state: no sites");
  Eigen::Index index = 0;
  for (int b : bits) {
    if (b != 0 && b != 1) throw DomainError("product_state: bits must be 0 or 1");
    index = (index << 1) | b;
  }
  ComplexVector v = ComplexVector::Zero(Eigen::Index{1} << bits.size());
  v(index) = 1.0;
  return v;
}

ComplexVector all_down(int n_sites) {
  std::vector<int> bits(static_cast<std::size_t>(n_sites), 1);
  return product_state(bits);
}

int total_sz(Eigen::Index index, int n_sites) {
  int down = 0;
  for (int k = 0; k < n_sites; ++k) down += static_cast<int>((index >> k) & 1);
  return n_sites - 2 * down;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

double relative_residual(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) {
    throw DomainError("relative_residual: dimension mismatch");
  }
  const double scale = std::max(lhs.norm(), rhs.norm());
  if (scale == 0.0) return 0.0;
  return (lhs - rhs).norm() / scale;
}

std::vector<std::vector<Eigen::Index>> irreducible_blocks(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw DomainError("irreducible_blocks: matrix not square");
  const Eigen::Index n = m.rows();

  std::vector<std::vector<Eigen::Index>> adjacency(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && m(i, j) != cplx{}) adjacency[static_cast<std::size_t>(i)].push_back(j);
    }
  }

  // Iterative Tarjan.
  constexpr Eigen::Index kUnvisited = -1;
  std::vector<Eigen::Index> index(static_cast<std::size_t>(n), kUnvisited);
  std::vector<Eigen::Index> low(static_cast<std::size_t>(n), 0);
  std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
  std::vector<Eigen::Index> stack;
  std::vector<std::vector<Eigen::Index>> components;
  Eigen::Index counter = 0;

  struct Frame {
    Eigen::Index node;
    std::size_t next_edge;
  };

  for (Eigen::Index root = 0; root < n; ++root) {
    if (index[static_cast<std::size_t>(root)] != kUnvisited) continue;
    std::vector<Frame> frames{{root, 0}};
    index[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = counter++;
    stack.push_back(root);
    on_stack[static_cast<std::size_t>(root)] = true;

    while (!frames.empty()) {
      Frame& frame = frames.back();
      const auto v = static_cast<std::size_t>(frame.node);
      if (frame.next_edge < adjacency[v].size()) {
        const auto w = static_cast<std::size_t>(adjacency[v][frame.next_edge++]);
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(static_cast<Eigen::Index>(w));
          on_stack[w] = true;
          frames.push_back({static_cast<Eigen::Index>(w), 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<Eigen::Index> component;
        Eigen::Index w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[static_cast<std::size_t>(w)] = false;
          component.push_back(w);
        } while (static_cast<std::size_t>(w) != v);
        std::sort(component.begin(), component.end());
        components.push_back(std::move(component));
      }
      frames.pop_back();
      if (!frames.empty()) {
        const auto parent = static_cast<std::size_t>(frames.back().node);
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }
  // Tarjan emits components in reverse topological order.
  std::reverse(components.begin(), components.end());
  return components;
}

Spectrum eigenvalues_dense(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw DomainError("eigenvalues: matrix not square");
  if (m.rows() == 0) return {};
  if (!all_finite(m)) throw DomainError("eigenvalues: non-finite entry");
  if (m.rows() == 1) return {m(0, 0)};
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw DecompositionError("eigenvalues: complex QR did not converge");
  }
  const auto& values = solver.eigenvalues();
  return Spectrum(values.data(), values.data() + values.size());
}

Spectrum eigenvalues(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw DomainError("eigenvalues: matrix not square");
  Spectrum out;
  out.reserve(static_cast<std::size_t>(m.rows()));
  for (const auto& block : irreducible_blocks(m)) {
    const auto size = static_cast<Eigen::Index>(block.size());
    ComplexMatrix sub(size, size);
    for (Eigen::Index i = 0; i < size; ++i) {
      for (Eigen::Index j = 0; j < size; ++j) {
        sub(i, j) = m(block[static_cast<std::size_t>(i)], block[static_cast<std::size_t>(j)]);
      }
    }
    const Spectrum part = eigenvalues_dense(sub);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

namespace {

bool lex_less(cplx a, cplx b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

// Kuhn's augmenting-path matching restricted to pairs within `threshold`.
bool perfect_matching_within(const Spectrum& s1, const Spectrum& s2, double threshold) {
  const std::size_t n = s1.size();
  std::vector<std::vector<std::size_t>> edges(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(s1[i] - s2[j]) <= threshold) edges[i].push_back(j);
    }
    if (edges[i].empty()) return false;
  }
  std::vector<std::ptrdiff_t> match_of_right(n, -1);
  std::vector<char> seen(n);

  auto augment = [&](auto&& self, std::size_t left) -> bool {
    for (std::size_t right : edges[left]) {
      if (seen[right]) continue;
      seen[right] = 1;
      if (match_of_right[right] < 0 ||
          self(self, static_cast<std::size_t>(match_of_right[right]))) {
        match_of_right[right] = static_cast<std::ptrdiff_t>(left);
        return true;
      }
    }
    return false;
  };
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(seen.begin(), seen.end(), 0);
    if (!augment(augment, i)) return false;
  }
  return true;
}

}  // namespace

SpectrumReport match_spectra(Spectrum s1, Spectrum s2, double tol) {
  if (s1.size() != s2.size()) throw DomainError("match_spectra: cardinality mismatch");
  std::sort(s1.begin(), s1.end(), lex_less);
  std::sort(s2.begin(), s2.end(), lex_less);

  double greedy = 0.0;
  for (std::size_t i = 0; i < s1.size(); ++i) greedy = std::max(greedy, std::abs(s1[i] - s2[i]));

  SpectrumReport report;
  report.eigenvalues = s1;
  report.max_pair_distance = greedy;
  if (greedy <= tol) {
    report.matched = true;
    return report;
  }

  // Optimal bottleneck assignment: smallest threshold admitting a perfect
  // matching, searched over the candidate pair distances below the greedy bound.
  std::vector<double> candidates;
  for (const auto& a : s1) {
    for (const auto& b : s2) {
      const double d = std::abs(a - b);
      if (d <= greedy) candidates.push_back(d);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  std::size_t lo = 0;
  std::size_t hi = candidates.size() - 1;  // greedy distance itself is feasible
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (perfect_matching_within(s1, s2, candidates[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  report.max_pair_distance = candidates[lo];
  report.matched = report.max_pair_distance <= tol;
  return report;
}

double distance_to_spectrum(cplx value, const Spectrum& spectrum) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : spectrum) best = std::min(best, std::abs(value - s));
  return best;
}

}  // namespace twistlab
