// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "twistlab/bethe.hpp"
#include "twistlab/fusion.hpp"
#include "twistlab/rmatrix.hpp"
#include "twistlab/suite.hpp"
#include "twistlab/symmetry.hpp"
#include "twistlab/twist.hpp"

using namespace twistlab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

ChainSpec make_spec(int n, cplx xi, cplx eta = 1.0) {
  ChainSpec s;
  s.n_sites = n;
  s.params = TwistParams{xi, eta};
  return s;
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

// Tracks the worst residual of a family against one bound.
struct Bound {
  const char* label;
  double limit;
  double worst = 0.0;
  void see(double r) { worst = std::max(worst, std::isfinite(r) ? r : 1e300); }
  bool ok() const { return worst < limit; }
  std::string text() const { return std::string(label) + " " + sci(worst) + " < " + sci(limit); }
};

Outcome combine(std::initializer_list<const Bound*> bounds, std::string extra = {}) {
  Outcome o;
  for (const Bound* b : bounds) {
    o.pass = o.pass && b->ok();
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += b->text() + (b->ok() ? "" : " FAILS");
  }
  if (!extra.empty()) o.detail += "; " + extra;
  return o;
}

Outcome criterion1() {
  RunConfig c;  // 100 samples, xi in [-1, 1], eta = 1
  Bound ybe{"max YBE residual", 1e-12};
  const auto reports = run_suite(c, Suite::ybe);
  for (const auto& r : reports) ybe.see(r.residual);
  Outcome o = combine({&ybe}, std::to_string(reports.size()) + " samples");
  o.pass = o.pass && reports.size() == 100;
  return o;
}

Outcome criterion2() {
  Sampler s(kDefaultSeed + 2);
  Bound rxi{"R_xi vs F21 F12^-1", 1e-13}, ru{"R(u) vs twisted form", 1e-13};
  for (int i = 0; i < 50; ++i) {
    const cplx xi = s.xi(false);
    const cplx u = s.spectral({0.0});
    const TwistParams p{xi, 1.0};
    rxi.see((build_r_xi(xi) - build_r_xi_product(xi)).norm());
    ru.see((build_r(u, p) - build_r_twisted(u, p)).norm());
  }
  return combine({&rxi, &ru}, "50 samples");
}

Outcome criterion3() {
  Sampler s(kDefaultSeed + 3);
  Bound rtt{"max RTT residual", 1e-11};
  for (int n = 1; n <= 4; ++n) {
    for (int i = 0; i < 20; ++i) {
      const ChainSpec spec = make_spec(n, s.xi(false));
      const cplx u = s.spectral({0.0});
      const cplx v = s.spectral({0.0, u});
      rtt.see(verify_rtt(spec, u, v));
    }
  }
  return combine({&rtt}, "N = 1..4, 20 samples each");
}

Outcome criterion4() {
  Sampler s(kDefaultSeed + 4);
  Bound comm{"max [t(u), t(v)]", 1e-11};
  for (int n = 2; n <= 6; ++n) {
    for (int i = 0; i < 20; ++i) {
      const ChainSpec spec = make_spec(n, s.xi(false));
      const cplx u = s.spectral({0.0});
      const cplx v = s.spectral({0.0, u});
      const ComplexMatrix tu = transfer_matrix(spec, u), tv = transfer_matrix(spec, v);
      comm.see(relative_residual(tu * tv, tv * tu));
    }
  }
  return combine({&comm}, "N = 2..6, 20 samples each");
}

Outcome criterion5() {
  Sampler s(kDefaultSeed + 5);
  Bound h{"H(xi) vs H(0) pair distance", 1e-8}, t{"t_xi(u) vs t_0(u) pair distance", 1e-7};
  bool matched = true;
  for (int n = 2; n <= 8; ++n) {
    for (const double xi : {0.3, 0.9, 10.0}) {
      std::vector<cplx> us;
      for (int k = 0; k < 5; ++k) us.push_back(s.spectral({0.0}));
      const SpectrumCoincidence c = verify_spectrum_coincidence(make_spec(n, xi), us);
      h.see(c.hamiltonian.max_pair_distance);
      for (const auto& r : c.transfer) t.see(r.max_pair_distance);
      matched = matched && c.matched;
    }
  }
  Outcome o = combine({&h, &t}, "N = 2..8, xi in {0.3, 0.9, 10}, 5 u each");
  o.pass = o.pass && matched;
  return o;
}

Outcome criterion6() {
  Sampler s(kDefaultSeed + 6);
  Bound fit{"affine fit residual", 1e-9}, comm{"[H, t(u)]", 1e-10};
  double printed = 0.0;
  for (const int n : {3, 4, 5}) {
    for (const double xi : {0.0, 0.5}) {
      const ChainSpec spec = make_spec(n, xi);
      const HamiltonianPair pair = extract_hamiltonian(spec);
      fit.see(pair.fit_residual);
      const ComplexMatrix t = transfer_matrix(spec, s.spectral({0.0}));
      comm.see(relative_residual(pair.h_model * t, t * pair.h_model));
      HamiltonianOptions opt;
      opt.reading = HamiltonianReading::printed;
      printed = std::max(printed, extract_hamiltonian(spec, opt).fit_residual);
    }
  }
  return combine({&fit, &comm}, "unit-coefficient xi terms would fit to " + sci(printed));
}

Outcome criterion7() {
  Sampler s(kDefaultSeed + 7);
  Bound vac{"vacuum action", 1e-11}, eig{"|t C(v)Omega - Lambda C(v)Omega|", 1e-10}, off{"off-shell identity", 1e-11};
  for (int n = 1; n <= 6; ++n) {
    const ChainSpec spec = make_spec(n, s.xi(false));
    const cplx u = s.spectral({0.0});
    const MonodromyBlocks t = build_monodromy(spec, u);
    const ComplexVector omega = all_down(n);
    vac.see((t.a * omega - omega).norm());
    vac.see((t.d * omega - vacuum_d(u, n, 1.0) * omega).norm());
    vac.see((t.b * omega).norm());
    if (n < 2) continue;
    const ComplexMatrix tm = transfer_matrix(spec, u);
    for (const cplx v : one_magnon_roots(n, 1.0)) {
      const BetheState st{n, 1, {v}, 0.0, 1.0};
      const ComplexVector psi = bethe_vector(spec, {v});
      eig.see((tm * psi - eval_lambda(u, st) * psi).norm());
    }
  }
  for (int i = 0; i < 20; ++i) {
    const ChainSpec spec = make_spec(2 + i % 4, s.xi(false));
    const cplx u = s.spectral({0.0});
    const cplx v = s.spectral({0.0, u});
    off.see(verify_one_magnon_action(spec, u, v));
  }
  return combine({&vac, &eig, &off});
}

Outcome criterion8() {
  Sampler s(kDefaultSeed + 8);
  const int n = 4;
  Bound root{"M = 1 root defect", 1e-12}, spec_b{"M = 2 eigenvalue distance", 1e-8},
      tq{"TQ residual", 1e-10}, control{"xi = 0 eigenvector defect", 1e-10};
  std::size_t found = 0;
  for (const cplx seed : one_magnon_roots(n, 1.0)) {
    const BetheState st = solve_bethe(n, 1, 1.0, {seed + cplx{0.05, -0.03}});
    root.see(st.residual);
    ++found;
  }
  const auto pairs = solve_two_magnon(n, 1.0);
  std::vector<cplx> avoid = {0.0, 1.0};
  for (const auto& p : pairs) {
    for (const cplx z : p.roots) {
      avoid.push_back(z);
      avoid.push_back(z + 1.0);
    }
  }
  const cplx u = s.spectral(avoid);
  const Spectrum exact = eigenvalues(transfer_matrix(make_spec(n, 0.5), u));
  double deformed = std::numeric_limits<double>::infinity();
  for (const auto& p : pairs) {
    spec_b.see(distance_to_spectrum(eval_lambda(u, p), exact));
    for (int k = 0; k < 10; ++k) tq.see(verify_tq(p, s.spectral(avoid)));
    deformed = std::min(deformed, eigenvector_defect(make_spec(n, 0.5), p, u));
    control.see(eigenvector_defect(make_spec(n, 0.0), p, u));
  }
  Outcome o = combine({&root, &spec_b, &tq, &control});
  const bool genuine = !pairs.empty() && deformed > 1e-4;
  o.detail += "; xi = 0.5 eigenvector defect " + sci(deformed) + " > 1e-04" + (genuine ? "" : " FAILS");
  o.detail += "; " + std::to_string(found) + " M = 1 and " + std::to_string(pairs.size()) + " M = 2 states";
  o.pass = o.pass && genuine && found == 3;
  return o;
}

Outcome criterion9() {
  Bound zero{"T0 upper-right block", 1e-13}, et{"[E, t(u)]", 1e-11}, cop{"coproducts", 1e-12};
  int flagged = 0, unresolved = 0;
  for (int n = 1; n <= 4; ++n) {
    RunConfig c;
    c.n_sites = n;
    c.samples = 10;
    for (const auto& r : run_suite(c, Suite::symmetry)) {
      if (r.check_id == "symmetry.t0_zero_block") zero.see(r.residual);
      if (r.check_id == "symmetry.e_commutes_t") et.see(r.residual);
      if (r.check_id.rfind("symmetry.relation.", 0) == 0) {
        if (r.kind == CheckKind::suspected_misprint) ++flagged;
        else if (!r.pass) ++unresolved;
      }
    }
  }
  for (const auto& [n1, n2] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{2, 2}}) {
    for (const double xi : {0.3, -0.8}) {
      const CoproductResiduals r = coproduct_residuals(n1, n2, xi);
      cop.see(std::max(r.e, r.g));
    }
  }
  Outcome o = combine({&zero, &et, &cop}, std::to_string(flagged) + " relation reports flagged as misprints, " +
                                             std::to_string(unresolved) + " unflagged failures");
  o.pass = o.pass && unresolved == 0;
  return o;
}

Outcome criterion10() {
  const cplx u{1.7, 0.4};
  Bound l1{"l = 1", 1e-9}, l2{"l = 2", 1e-9};
  double best = 0.0, standard = 0.0;
  for (int n = 1; n <= 3; ++n) {
    for (const double xi : {0.0, 0.4}) {
      const ChainSpec spec = make_spec(n, xi);
      l1.see(verify_fusion_relation(spec, 1, u));
      l2.see(verify_fusion_relation(spec, 2, u));
      best = std::max(best, fusion_relation_best_scalar(spec, 2, u));
      standard = std::max(standard, verify_standard_recursion(spec, 2, u));
    }
  }
  return combine({&l1, &l2}, "l = 2 with a free scalar still " + sci(best) +
                                 "; determinant-form l = 2 recursion " + sci(standard));
}

Outcome criterion11() {
  const SpinRep half = make_spin_rep(0.5), one = make_spin_rep(1.0);
  bool exact = true;
  for (const double xi : {0.0, 1.0, -2.0, 0.5}) {
    exact = exact && (universal_twist(half, half, xi) - build_f12(xi)).cwiseAbs().maxCoeff() == 0.0;
  }
  Bound cocycle{"cocycle", 1e-12}, expo{"exp(-sigma) - (1 - 2 xi e)", 1e-13};
  Sampler s(kDefaultSeed + 11);
  for (int i = 0; i < 20; ++i) {
    const cplx xi = s.xi(i % 2 == 1);
    cocycle.see(verify_cocycle(half, half, half, xi));
    cocycle.see(verify_cocycle(half, half, one, xi));
    for (const double spin : {0.5, 1.0, 1.5}) {
      const SpinRep r = make_spin_rep(spin);
      expo.see((nilpotent_exp(-sigma_element(r, xi)) - (identity(r.dim) - 2.0 * xi * r.e)).norm());
    }
  }
  Outcome o = combine({&cocycle, &expo}, std::string("universal twist equals F12 entrywise: ") +
                                             (exact ? "yes" : "no"));
  o.pass = o.pass && exact;
  return o;
}

Outcome criterion12() {
  RunConfig c;
  const std::string first = to_json(c, run_suite(c, Suite::all));
  const std::string second = to_json(c, run_suite(c, Suite::all));
  Outcome o;
  o.pass = first == second;
  o.detail = std::to_string(first.size()) + " bytes, " + (o.pass ? "identical" : "DIFFER");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "YBE suite", 1.0, criterion1},
      {2, "construction cross-check", 1.0, criterion2},
      {3, "RTT suite", 30.0, criterion3},
      {4, "commuting transfer matrices", 60.0, criterion4},
      {5, "spectrum coincidence", 120.0, criterion5},
      {6, "Hamiltonian extraction", 60.0, criterion6},
      {7, "vacuum and one magnon", 60.0, criterion7},
      {8, "Bethe roots and TQ", 60.0, criterion8},
      {9, "symmetry algebra", 60.0, criterion9},
      {10, "fusion relation", 60.0, criterion10},
      {11, "twist algebra", 5.0, criterion11},
      {12, "determinism, full suite twice", 600.0, criterion12},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("criterion %2d %s  %s: %s [%.2f s of %.0f s%s]\n", c.id, pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), secs, c.budget_s, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
