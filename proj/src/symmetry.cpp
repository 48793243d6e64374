#include "twistlab/symmetry.hpp"

#include <cstdio>

#include "twistlab/errors.hpp"
#include "twistlab/expression.hpp"
#include "twistlab/rmatrix.hpp"

namespace twistlab {

namespace {

double blocks_residual(const MonodromyBlocks& x, const MonodromyBlocks& y) {
  double diff = 0.0, scale_x = 0.0, scale_y = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      diff += (x.block(i, j) - y.block(i, j)).squaredNorm();
      scale_x += x.block(i, j).squaredNorm();
      scale_y += y.block(i, j).squaredNorm();
    }
  }
  const double scale = std::sqrt(std::max(scale_x, scale_y));
  return scale > 0.0 ? std::sqrt(diff) / scale : 0.0;
}

MonodromyBlocks scaled(MonodromyBlocks t, cplx s) {
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) t.block(i, j) *= s;
  }
  return t;
}

}  // namespace

AsymptoticData extract_t0(const ChainSpec& spec) {
  spec.validate();
  const ComplexMatrix r_xi = build_r_xi(spec.params.xi);
  // With w = 1/u each factor is R_ξ + w·(−ηP); the jet at w = 0 gives T0 and
  // the 1/u coefficient together.
  const MonodromyJet jet =
      monodromy_jet_at_zero(-spec.params.eta * permutation_op(), r_xi, spec.n_sites);

  AsymptoticData out;
  out.e = jet.value.a;
  out.g = jet.value.c;
  out.e_inv = jet.value.d;
  out.zero_block_residual = jet.value.b.norm();
  out.inverse_residual = (out.e * out.e_inv - identity(spec.dim())).norm();
  out.order1 = jet.derivative;
  return out;
}

const char* to_string(Order1Reading r) {
  switch (r) {
    case Order1Reading::ordered_with_eta: return "ordered_with_eta";
    case Order1Reading::ordered: return "ordered";
    case Order1Reading::literal: return "literal";
  }
  return "ordered";
}

MonodromyBlocks order1_reading(const ChainSpec& spec, Order1Reading reading) {
  spec.validate();
  const int n = spec.n_sites;
  const ComplexMatrix r_xi = build_r_xi(spec.params.xi);
  const ComplexMatrix p = permutation_op();

  MonodromyBlocks sum = identity_monodromy(n);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) sum.block(i, j).setZero();
  }
  for (int k = 1; k <= n; ++k) {
    MonodromyBlocks term = identity_monodromy(n);
    if (reading == Order1Reading::literal) {
      // Rightmost factor first: M_{N−k−1}, then P_ak, then M_k.
      for (int m = 1; m <= n - k - 2; ++m) term = left_multiply_local(r_xi, m, n, term);
      term = left_multiply_local(p, k, n, term);
      for (int m = 1; m <= k - 1; ++m) term = left_multiply_local(r_xi, m, n, term);
    } else {
      for (int m = 1; m < k; ++m) term = left_multiply_local(r_xi, m, n, term);
      term = left_multiply_local(p, k, n, term);
      for (int m = k + 1; m <= n; ++m) term = left_multiply_local(r_xi, m, n, term);
    }
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) sum.block(i, j) += term.block(i, j);
    }
  }
  return reading == Order1Reading::ordered_with_eta ? scaled(std::move(sum), -spec.params.eta) : sum;
}

double order1_residual(const ChainSpec& spec, Order1Reading reading) {
  return blocks_residual(order1_reading(spec, reading), extract_t0(spec).order1);
}

const std::vector<SymmetryRelation>& symmetry_relations() {
  static const std::vector<SymmetryRelation> relations = {
      {"eg", "E G = G E - xi (1 - E^2)"},
      {"ea", "E A(u) = A(u)E - xi B(u)E"},
      {"ed", "E D(u) = D(u)E + xi E B(u)"},
      {"eb", "E B(u) = B(u)E"},
      {"ec1", "E C(u) = C(u)E + xi E A(u) - xi D(u)E"},
      {"ec2", "E C(u) = C(u)E + xi(A(u) - D(u))E - xi^2 B(u)E"},
      {"gb", "G B(u) = B(u)G - xi(E B(u) + B(u)E^-1)"},
      {"ga", "G A(u) = A(u)G - xi(E A(u) - A(u)E^-1 + B(u)G) + xi^2 B(u)E^-1"},
      {"gd", "G D(u) = D(u)G + xi(E D(u) - D(u)E^-1 - G B(u)) - xi^2 B(u)E"},
      {"gc",
       "G C(u) = C(u)G + xi(E C(u) + C(u)E^-1 - G A(u) - D(u)G) + xi^2(D(u)E^-1 - E A(u))"},
  };
  return relations;
}

std::vector<VerificationReport> verify_symmetry_relations(const ChainSpec& spec, cplx u,
                                                          double tolerance) {
  const AsymptoticData t0 = extract_t0(spec);
  const MonodromyBlocks t = build_monodromy(spec, u);
  const Resolver resolve = [&](const std::string& name, const std::vector<std::string>& args) {
    if (args.empty()) {
      if (name == "E") return Value::of(t0.e);
      if (name == "G") return Value::of(t0.g);
      if (name == "xi") return Value::of(spec.params.xi);
      if (name == "eta") return Value::of(spec.params.eta);
    } else if (args.size() == 1 && args[0] == "u") {
      if (name == "A") return Value::of(t.a);
      if (name == "B") return Value::of(t.b);
      if (name == "C") return Value::of(t.c);
      if (name == "D") return Value::of(t.d);
    }
    throw DomainError("unknown symbol '" + name + "'");
  };
  const std::vector<std::pair<std::string, cplx>> params = {
      {"N", static_cast<double>(spec.n_sites)}, {"xi", spec.params.xi}, {"eta", spec.params.eta},
      {"u", u}};

  std::vector<VerificationReport> out;
  for (const auto& rel : symmetry_relations()) {
    const double residual = Relation::parse(rel.id, rel.text).residual(resolve, spec.dim());
    out.push_back(make_report("symmetry.relation." + rel.id, params, residual, tolerance,
                              CheckKind::check, rel.text));
  }
  return out;
}

double e_transfer_commutator(const ChainSpec& spec, cplx u) {
  const ComplexMatrix e = extract_t0(spec).e;
  const ComplexMatrix t = transfer_matrix(spec, u);
  return relative_residual(e * t, t * e);
}

double unipotency_residual(const ChainSpec& spec) {
  const ComplexMatrix nil = extract_t0(spec).e - identity(spec.dim());
  ComplexMatrix power = nil;
  for (int k = 0; k < spec.n_sites; ++k) power = power * nil;
  return power.norm();
}

CoproductResiduals coproduct_residuals(int n1, int n2, cplx xi) {
  if (n1 < 1 || n2 < 1 || n1 + n2 > kMaxSites) {
    throw DomainError("coproduct_residuals: need n1, n2 >= 1 and n1 + n2 <= " +
                      std::to_string(kMaxSites));
  }
  const auto data = [&](int n) {
    ChainSpec spec;
    spec.n_sites = n;
    spec.params.xi = xi;
    return extract_t0(spec);
  };
  const AsymptoticData first = data(n1), second = data(n2), whole = data(n1 + n2);

  CoproductResiduals out;
  out.e = relative_residual(whole.e, kron(first.e, second.e));
  out.g = relative_residual(whole.g, kron(first.e, second.g) + kron(first.g, second.e_inv));
  out.g_swapped = relative_residual(whole.g, kron(first.g, second.e) + kron(first.e_inv, second.g));
  return out;
}

VerificationReport verify_coproducts(int n1, int n2, cplx xi, double tolerance) {
  const CoproductResiduals r = coproduct_residuals(n1, n2, xi);
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "E residual %.3e; G residual %.3e; G with the other factor order %.3e", r.e, r.g,
                r.g_swapped);
  return make_report("symmetry.coproduct",
                     {{"n1", static_cast<double>(n1)}, {"n2", static_cast<double>(n2)}, {"xi", xi}},
                     std::max(r.e, r.g), tolerance, CheckKind::check, buf);
}

}  // namespace twistlab
