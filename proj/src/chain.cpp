#include "twistlab/chain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "twistlab/errors.hpp"
#include "twistlab/expression.hpp"
#include "twistlab/rmatrix.hpp"

namespace twistlab {

const char* to_string(Boundary b) { return b == Boundary::periodic ? "periodic" : "open"; }

void ChainSpec::validate() const {
  if (n_sites < 1 || n_sites > kMaxSites) {
    throw DomainError("chain length must lie in [1, " + std::to_string(kMaxSites) + "], got " +
                      std::to_string(n_sites));
  }
  params.validate();
}

const ComplexMatrix& MonodromyBlocks::block(int i, int j) const {
  if (i == 0) return j == 0 ? a : b;
  return j == 0 ? c : d;
}

ComplexMatrix& MonodromyBlocks::block(int i, int j) {
  if (i == 0) return j == 0 ? a : b;
  return j == 0 ? c : d;
}

cplx alpha(cplx u, cplx v, cplx eta) { return 1.0 + beta(u, v, eta); }

cplx beta(cplx u, cplx v, cplx eta) {
  if (u == v) throw DomainError("beta: coincident arguments");
  return -eta / (u - v);
}

cplx vacuum_d(cplx u, int n_sites, cplx eta) {
  if (u == cplx{}) throw DomainError("vacuum_d: pole at u = 0");
  return std::pow(1.0 - eta / u, n_sites);
}

namespace {

// 2x2 site operator <i|local|m> on the auxiliary factor.
ComplexMatrix local_entry(const ComplexMatrix& local, int i, int m) {
  ComplexMatrix op(2, 2);
  for (int s = 0; s < 2; ++s) {
    for (int t = 0; t < 2; ++t) op(s, t) = local(2 * i + s, 2 * m + t);
  }
  return op;
}

}  // namespace

MonodromyBlocks identity_monodromy(int n_sites) {
  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  MonodromyBlocks t;
  t.a = identity(dim);
  t.b = ComplexMatrix::Zero(dim, dim);
  t.c = ComplexMatrix::Zero(dim, dim);
  t.d = identity(dim);
  return t;
}

MonodromyBlocks left_multiply_local(const ComplexMatrix& local, int site, int n_sites,
                                    const MonodromyBlocks& t) {
  MonodromyBlocks out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      ComplexMatrix acc = ComplexMatrix::Zero(t.a.rows(), t.a.cols());
      for (int m = 0; m < 2; ++m) {
        const ComplexMatrix op = local_entry(local, i, m);
        if (op.isZero(0.0)) continue;
        ComplexMatrix term = t.block(m, j);
        apply_site_left(op, site, n_sites, term);
        acc += term;
      }
      out.block(i, j) = std::move(acc);
    }
  }
  out.u = t.u;
  return out;
}

namespace {

void add_into(MonodromyBlocks& target, const MonodromyBlocks& other) {
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) target.block(i, j) += other.block(i, j);
  }
}

ComplexMatrix local_operator(const ChainSpec& spec, cplx u, LForm form) {
  return form == LForm::rational ? build_r(u, spec.params) : build_r_poly(u, spec.params);
}

}  // namespace

MonodromyBlocks monodromy_from_local(const ComplexMatrix& local, int n_sites) {
  if (local.rows() != 4 || local.cols() != 4) throw DomainError("local operator must be 4x4");
  MonodromyBlocks t = identity_monodromy(n_sites);
  for (int k = 1; k <= n_sites; ++k) t = left_multiply_local(local, k, n_sites, t);
  return t;
}

MonodromyJet monodromy_jet_at_zero(const ComplexMatrix& slope, const ComplexMatrix& offset,
                                   int n_sites) {
  // (L T)' = L' T + L T' with L(0) = offset and L'(0) = slope.
  MonodromyJet jet{identity_monodromy(n_sites), identity_monodromy(n_sites)};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) jet.derivative.block(i, j).setZero();
  }
  for (int k = 1; k <= n_sites; ++k) {
    MonodromyBlocks derivative = left_multiply_local(slope, k, n_sites, jet.value);
    add_into(derivative, left_multiply_local(offset, k, n_sites, jet.derivative));
    jet.value = left_multiply_local(offset, k, n_sites, jet.value);
    jet.derivative = std::move(derivative);
  }
  return jet;
}

MonodromyBlocks build_monodromy(const ChainSpec& spec, cplx u, LForm form) {
  spec.validate();
  MonodromyBlocks t = monodromy_from_local(local_operator(spec, u, form), spec.n_sites);
  t.u = u;
  return t;
}

ComplexMatrix transfer_matrix(const ChainSpec& spec, cplx u, LForm form) {
  const MonodromyBlocks t = build_monodromy(spec, u, form);
  return t.a + t.d;
}

std::array<std::array<double, 4>, 4> rtt_components(const ChainSpec& spec, cplx u, cplx v) {
  if (u == v) throw DomainError("verify_rtt: u and v must differ");
  const MonodromyBlocks tu = build_monodromy(spec, u);
  const MonodromyBlocks tv = build_monodromy(spec, v);
  const ComplexMatrix r = build_r(u - v, spec.params);

  // (T_1(u) T_2(v))_{(i1 i2),(j1 j2)} = T_{i1 j1}(u) T_{i2 j2}(v), and the
  // reversed product keeps T(v) on the left.
  std::array<std::array<ComplexMatrix, 4>, 4> forward, backward;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      forward[a][b] = tu.block(a / 2, b / 2) * tv.block(a % 2, b % 2);
      backward[a][b] = tv.block(a % 2, b % 2) * tu.block(a / 2, b / 2);
    }
  }
  std::array<std::array<double, 4>, 4> out{};
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      ComplexMatrix lhs = ComplexMatrix::Zero(spec.dim(), spec.dim());
      ComplexMatrix rhs = ComplexMatrix::Zero(spec.dim(), spec.dim());
      for (int k = 0; k < 4; ++k) {
        if (r(a, k) != cplx{}) lhs += r(a, k) * forward[k][b];
        if (r(k, b) != cplx{}) rhs += backward[a][k] * r(k, b);
      }
      out[a][b] = relative_residual(lhs, rhs);
    }
  }
  return out;
}

double verify_rtt(const ChainSpec& spec, cplx u, cplx v) {
  if (u == v) throw DomainError("verify_rtt: u and v must differ");
  const MonodromyBlocks tu = build_monodromy(spec, u);
  const MonodromyBlocks tv = build_monodromy(spec, v);
  const ComplexMatrix r = build_r(u - v, spec.params);
  const Eigen::Index dim = spec.dim();

  ComplexMatrix forward(4 * dim, 4 * dim), backward(4 * dim, 4 * dim);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      forward.block(a * dim, b * dim, dim, dim) = tu.block(a / 2, b / 2) * tv.block(a % 2, b % 2);
      backward.block(a * dim, b * dim, dim, dim) = tv.block(a % 2, b % 2) * tu.block(a / 2, b / 2);
    }
  }
  const ComplexMatrix r_big = kron(r, identity(dim));
  return relative_residual(r_big * forward, backward * r_big);
}

const std::vector<CommutationRelation>& commutation_relations() {
  static const std::vector<CommutationRelation> relations = {
      {"cr01",
       "A(u)C(v) = alpha(u,v)C(v)A(u) - (beta(u,v)C(u) - xi A(u))A(v) - xi D(v)A(u)"
       " + (xi C(v) + xi^2 D(v))B(u)",
       ""},
      {"cr02",
       "D(u)C(v) = (alpha(v,u)C(v) - xi A(v))D(u) - (beta(v,u)C(u) - xi D(u))D(v)"
       " + (xi C(v) + xi^2 A(v))B(u)",
       ""},
      {"cr03",
       "B(u)C(v) = (C(v) + xi D(v))B(u) + (xi B(u) - beta(u,v)D(u))A(v) + beta(u,v)D(v)A(u)", ""},
      {"cr04",
       "alpha(u,v)C(u)C(v) = (alpha(u,v)C(v) - xi D(v))C(u) + (xi C(v) + xi^2 D(v))D(u)"
       " + (-xi C(u) - xi^2 A(u))A(v) + xi A(u)C(v)",
       ""},
      {"cr05",
       "alpha(u,v)A(u)A(v) = (alpha(u,v)A(v) - xi B(v))A(u) + (xi A(v) + xi^2 B(v))B(u)", ""},
      {"cr06", "alpha(u,v)A(u)B(v) = B(v)A(u) + (beta(u,v)A(v) - xi B(v))B(u)", ""},
      {"cr07", "B(u)B(v) = B(v)B(u)", ""},
      {"cr08",
       "A(u)D(v) = D(v)A(u) + (xi A(u) - beta(u,v)C(u))B(v) + (beta(u,v)C(v) - xi D(v))B(u)", ""},
      {"cr09", "alpha(v,u)D(u)B(v) = B(v)D(u) + (beta(v,u)D(v) - xi B(v))B(u)", ""},
      {"cr10",
       "(C(u) + xi A(u))A(v) = (alpha(u,v)A(v) - xi B(v))C(u) + (xi A(v) + xi^2 B(v))D(u)"
       " - beta(u,v)A(u)C(v)",
       ""},
      {"cr11",
       "B(u)C(v) = (C(v) + xi A(v))B(u) + xi B(u)D(v) + beta(v,u)(A(v)D(u) - A(u)D(v))", ""},
      {"cr12",
       "beta(u,v)B(u)C(v) = beta(u,v)B(v)C(u) + (A(v) + xi B(v))D(u) - (D(u) + xi B(u))A(v)", ""},
      {"cr13", "D(u)B(v) = alpha(u,v)B(v)D(u) - beta(u,v)B(u)D(v) - B(u)B(v)",
       "D(u)B(v) = alpha(u,v)B(v)D(u) - beta(u,v)B(u)D(v) - xi B(u)B(v)"},
      {"cr14",
       "(alpha(u,v)D(u) - xi B(u))D(v) + (xi D(u) + xi^2 B(u))B(v) = alpha(u,v)D(v)D(u)", ""},
  };
  return relations;
}

namespace {

struct ScatteringResolver {
  const ChainSpec& spec;
  const MonodromyBlocks& at_u;
  const MonodromyBlocks& at_v;

  cplx point(const std::string& name) const {
    if (name == "u") return at_u.u;
    if (name == "v") return at_v.u;
    throw DomainError("unknown spectral argument '" + name + "'");
  }

  Value operator()(const std::string& name, const std::vector<std::string>& args) const {
    const cplx eta = spec.params.eta;
    if (args.empty()) {
      if (name == "xi") return Value::of(spec.params.xi);
      if (name == "eta") return Value::of(eta);
      throw DomainError("unknown symbol '" + name + "'");
    }
    if (args.size() == 1) {
      const bool at_first = point(args[0]) == at_u.u;
      const MonodromyBlocks& t = at_first ? at_u : at_v;
      if (name == "A") return Value::of(t.a);
      if (name == "B") return Value::of(t.b);
      if (name == "C") return Value::of(t.c);
      if (name == "D") return Value::of(t.d);
      if (name == "d") return Value::of(vacuum_d(point(args[0]), spec.n_sites, eta));
    }
    if (args.size() == 2) {
      if (name == "alpha") return Value::of(alpha(point(args[0]), point(args[1]), eta));
      if (name == "beta") return Value::of(beta(point(args[0]), point(args[1]), eta));
    }
    throw DomainError("unknown symbol '" + name + "'");
  }
};

}  // namespace

std::vector<VerificationReport> verify_commutation_relations(const ChainSpec& spec, cplx u, cplx v,
                                                             double tolerance) {
  if (u == v) throw DomainError("verify_commutation_relations: u and v must differ");
  const MonodromyBlocks tu = build_monodromy(spec, u);
  const MonodromyBlocks tv = build_monodromy(spec, v);
  const Resolver resolve = ScatteringResolver{spec, tu, tv};
  const std::vector<std::pair<std::string, cplx>> params = {
      {"N", static_cast<double>(spec.n_sites)}, {"xi", spec.params.xi}, {"eta", spec.params.eta},
      {"u", u}, {"v", v}};

  std::vector<VerificationReport> out;
  for (const auto& rel : commutation_relations()) {
    const std::string id = "chain.cr." + rel.id;
    const bool divides = rel.text.find("alpha(") < rel.text.find('=');
    if (divides && (std::abs(alpha(u, v, spec.params.eta)) < 1e-12 ||
                    std::abs(alpha(v, u, spec.params.eta)) < 1e-12)) {
      out.push_back(make_report(id, params, 0.0, tolerance, CheckKind::observation,
                                "skipped: alpha vanishes at this sample"));
      continue;
    }
    const double residual = Relation::parse(rel.id, rel.text).residual(resolve, spec.dim());
    std::string notes = rel.text;
    if (!rel.candidate.empty() && residual > tolerance) {
      const double alt = Relation::parse(rel.id, rel.candidate).residual(resolve, spec.dim());
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.3e", alt);
      notes += " | candidate '" + rel.candidate + "' residual " + buf;
    }
    out.push_back(make_report(id, params, residual, tolerance, CheckKind::check, notes));
  }
  return out;
}

ComplexMatrix build_hamiltonian(const ChainSpec& spec, HamiltonianOptions options) {
  spec.validate();
  const int n = spec.n_sites;
  if (n < 2) throw DomainError("build_hamiltonian: need at least two sites");
  const cplx xi = spec.params.xi;
  const double weight = options.reading == HamiltonianReading::transfer_consistent ? 2.0 : 1.0;
  const ComplexMatrix sx = pauli::x(), sy = pauli::y(), sz = pauli::z(), sm = pauli::minus();

  const Eigen::Index dim = spec.dim();
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  const int bonds = spec.boundary == Boundary::periodic ? n : n - 1;
  for (int site = 1; site <= bonds; ++site) {
    const int next = site % n + 1;
    const auto at = [&](const ComplexMatrix& op, int k) { return embed_at_site(op, k, n); };
    h += at(sx, site) * at(sx, next);
    h += options.literal_sigma_y ? ComplexMatrix(at(sy, site) * at(sy, site))
                                 : ComplexMatrix(at(sy, site) * at(sy, next));
    h += at(sz, site) * at(sz, next);
    h += weight * xi * xi * at(sm, site) * at(sm, next);
    h += weight * xi * (at(sm, site) - at(sm, next));
  }
  return h;
}

namespace {

ComplexMatrix transfer_derivative_fd(const ChainSpec& spec, double step) {
  return (transfer_matrix(spec, step, LForm::polynomial) -
          transfer_matrix(spec, -step, LForm::polynomial)) /
         (2.0 * step);
}

}  // namespace

HamiltonianPair extract_hamiltonian(const ChainSpec& spec, HamiltonianOptions options,
                                    DerivativeMethod method, double step) {
  spec.validate();
  if (spec.boundary != Boundary::periodic) {
    throw DomainError("extract_hamiltonian: periodic boundary required");
  }
  if (spec.n_sites < 2) throw DomainError("extract_hamiltonian: need at least two sites");

  const ComplexMatrix slope = build_r_xi(spec.params.xi);
  const ComplexMatrix offset = -spec.params.eta * permutation_op();
  const MonodromyJet jet = monodromy_jet_at_zero(slope, offset, spec.n_sites);
  const ComplexMatrix t0 = jet.value.a + jet.value.d;
  const ComplexMatrix t1 = method == DerivativeMethod::exact ? ComplexMatrix(jet.derivative.a +
                                                                             jet.derivative.d)
                                                             : transfer_derivative_fd(spec, step);

  Eigen::PartialPivLU<ComplexMatrix> lu(t0);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-12)) throw DecompositionError("extract_hamiltonian: t(0) is singular");

  HamiltonianPair pair;
  pair.h_model = build_hamiltonian(spec, options);
  pair.h_log = lu.solve(t1);

  // Least squares for h_log ≈ a·H + b·I in the Frobenius inner product.
  const ComplexMatrix& h = pair.h_model;
  const double n = static_cast<double>(spec.dim());
  Eigen::Matrix2cd gram;
  gram << h.squaredNorm(), std::conj(h.trace()), h.trace(), n;
  Eigen::Vector2cd rhs;
  rhs << (h.adjoint() * pair.h_log).trace(), pair.h_log.trace();
  const Eigen::Vector2cd coef = gram.fullPivLu().solve(rhs);
  pair.scale_a = coef(0);
  pair.shift_b = coef(1);
  const ComplexMatrix fitted = pair.scale_a * h + pair.shift_b * identity(spec.dim());
  const double scale = pair.h_log.norm();
  pair.fit_residual = scale > 0.0 ? (pair.h_log - fitted).norm() / scale : 0.0;
  return pair;
}

double strictly_lowering_residual(const ComplexMatrix& m, int n_sites) {
  double worst = 0.0;
  for (Eigen::Index col = 0; col < m.cols(); ++col) {
    const int sz_col = total_sz(col, n_sites);
    for (Eigen::Index row = 0; row < m.rows(); ++row) {
      if (total_sz(row, n_sites) >= sz_col) worst = std::max(worst, std::abs(m(row, col)));
    }
  }
  return worst;
}

SpectrumCoincidence verify_spectrum_coincidence(const ChainSpec& spec, const std::vector<cplx>& us,
                                                double hamiltonian_tol, double transfer_tol) {
  spec.validate();
  if (spec.boundary != Boundary::periodic) {
    throw DomainError("verify_spectrum_coincidence: periodic boundary required");
  }
  ChainSpec plain = spec;
  plain.params.xi = 0.0;

  SpectrumCoincidence out;
  out.matched = true;
  if (spec.n_sites >= 2) {
    out.hamiltonian = match_spectra(eigenvalues(build_hamiltonian(spec)),
                                    eigenvalues(build_hamiltonian(plain)), hamiltonian_tol);
    out.matched = out.hamiltonian.matched;
  }
  for (const cplx u : us) {
    SpectrumReport r = match_spectra(eigenvalues(transfer_matrix(spec, u)),
                                     eigenvalues(transfer_matrix(plain, u)), transfer_tol);
    out.matched = out.matched && r.matched;
    out.transfer.push_back(std::move(r));
  }
  return out;
}

}  // namespace twistlab
