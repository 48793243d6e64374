#include "twistlab/suite.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>

#include "twistlab/bethe.hpp"
#include "twistlab/errors.hpp"
#include "twistlab/fusion.hpp"
#include "twistlab/rmatrix.hpp"
#include "twistlab/symmetry.hpp"
#include "twistlab/twist.hpp"

namespace twistlab {

const char* to_string(Suite s) {
  switch (s) {
    case Suite::ybe: return "ybe";
    case Suite::rtt: return "rtt";
    case Suite::cr: return "cr";
    case Suite::spectrum: return "spectrum";
    case Suite::bethe: return "bethe";
    case Suite::symmetry: return "symmetry";
    case Suite::fusion: return "fusion";
    case Suite::twist: return "twist";
    case Suite::all: return "all";
  }
  return "all";
}

std::optional<Suite> parse_suite(std::string_view name) {
  for (Suite s : {Suite::ybe, Suite::rtt, Suite::cr, Suite::spectrum, Suite::bethe, Suite::symmetry,
                  Suite::fusion, Suite::twist, Suite::all}) {
    if (name == to_string(s)) return s;
  }
  return std::nullopt;
}

const std::vector<Suite>& concrete_suites() {
  static const std::vector<Suite> suites = {Suite::ybe,      Suite::twist,    Suite::rtt,
                                            Suite::cr,       Suite::spectrum, Suite::bethe,
                                            Suite::symmetry, Suite::fusion};
  return suites;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Decimal real with optional sign, digits, '.', and exponent.
bool parse_real(std::string_view s, double& out) {
  if (s.empty()) return false;
  std::size_t i = 0;
  if (s[i] == '+' || s[i] == '-') ++i;
  bool digits = false;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, digits = true;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, digits = true;
  }
  if (!digits) return false;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    const std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == start) return false;
  }
  if (i != s.size()) return false;
  const std::string copy(s);
  out = std::strtod(copy.c_str(), nullptr);
  return std::isfinite(out);
}

[[noreturn]] void bad_complex(std::string_view text) {
  throw DomainError("cannot parse complex number '" + std::string(text) + "'");
}

}  // namespace

cplx parse_complex(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) bad_complex(text);
  if (s.back() != 'i') {
    double re = 0.0;
    if (!parse_real(s, re)) bad_complex(text);
    return {re, 0.0};
  }
  const std::string_view body = s.substr(0, s.size() - 1);
  // Split at the last sign that is not the leading one and not an exponent sign.
  std::size_t split = std::string_view::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  double re = 0.0, im = 0.0;
  std::string_view imag_part = body;
  if (split != std::string_view::npos) {
    if (!parse_real(body.substr(0, split), re)) bad_complex(text);
    imag_part = body.substr(split);
  }
  if (imag_part.empty() || imag_part == "+") {
    im = 1.0;
  } else if (imag_part == "-") {
    im = -1.0;
  } else if (!parse_real(imag_part, im)) {
    bad_complex(text);
  }
  return {re, im};
}

void RunConfig::validate() const {
  if (samples < 1) throw DomainError("samples must be at least 1");
  if (n_sites < 1 || n_sites > kMaxSites) {
    throw DomainError("n_sites must lie in [1, " + std::to_string(kMaxSites) + "]");
  }
  TwistParams{xi.value_or(0.0), eta}.validate();
}

double RunConfig::tolerance(const std::string& check_id, double fallback) const {
  std::string key = check_id;
  while (true) {
    auto it = tolerances.find(key);
    if (it != tolerances.end()) return it->second;
    const auto dot = key.rfind('.');
    if (dot == std::string::npos) return fallback;
    key.resize(dot);
  }
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv(kSeedEnvVar)) {
    std::uint64_t value = 0;
    const std::string_view s = trim(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec == std::errc{} && ptr == s.data() + s.size() && !s.empty()) return value;
  }
  return kDefaultSeed;
}

namespace {

bool parse_bool(std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw DomainError("expected a boolean, got '" + std::string(v) + "'");
}

int parse_int(std::string_view v) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw DomainError("expected an integer, got '" + std::string(v) + "'");
  }
  return out;
}

}  // namespace

RunConfig parse_config(std::string_view text, RunConfig base) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw DomainError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(view.substr(0, eq)));
    const std::string_view value = trim(view.substr(eq + 1));
    if (key == "seed") {
      std::uint64_t seed = 0;
      const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), seed);
      if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw DomainError("config line " + std::to_string(line_no) + ": bad seed");
      }
      base.seed = seed;
    } else if (key == "n_sites") {
      base.n_sites = parse_int(value);
    } else if (key == "xi") {
      base.xi = parse_complex(value);
    } else if (key == "eta") {
      base.eta = parse_complex(value);
    } else if (key == "boundary") {
      if (value == "periodic") {
        base.boundary = Boundary::periodic;
      } else if (value == "open") {
        base.boundary = Boundary::open;
      } else {
        throw DomainError("config line " + std::to_string(line_no) + ": boundary is periodic|open");
      }
    } else if (key == "samples") {
      base.samples = parse_int(value);
    } else if (key == "complex_xi") {
      base.complex_xi = parse_bool(value);
    } else if (key.rfind("tol.", 0) == 0 && key.size() > 4) {
      double tol = 0.0;
      if (!parse_real(value, tol) || tol < 0.0) {
        throw DomainError("config line " + std::to_string(line_no) + ": bad tolerance");
      }
      base.tolerances[key.substr(4)] = tol;
    } else {
      throw DomainError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  return base;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), std::move(base));
}

// ---------------------------------------------------------------------------
// Sampling

double Sampler::uniform(double lo, double hi) {
  const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

cplx Sampler::xi(bool complex_disk) {
  if (!complex_disk) return uniform(-1.0, 1.0);
  while (true) {
    const cplx z{uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
    if (std::abs(z) <= 1.0) return z;
  }
}

cplx Sampler::spectral(const std::vector<cplx>& avoid) {
  while (true) {
    const cplx z{uniform(-5.0, 5.0), uniform(-5.0, 5.0)};
    const double r = std::abs(z);
    if (r < 0.5 || r > 5.0) continue;
    const bool clear = std::all_of(avoid.begin(), avoid.end(),
                                   [&](cplx p) { return std::abs(z - p) >= 0.1; });
    if (clear) return z;
  }
}

// ---------------------------------------------------------------------------
// Suites

namespace {

using Params = std::vector<std::pair<std::string, cplx>>;

std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

class Runner {
public:
  Runner(const RunConfig& config, Suite suite)
      : config_(config),
        sampler_(mix(config.seed ^ mix(static_cast<std::uint64_t>(suite) + 1))) {}

  cplx xi() { return config_.xi ? *config_.xi : sampler_.xi(config_.complex_xi); }
  cplx spectral(const std::vector<cplx>& avoid = {}) { return sampler_.spectral(avoid); }
  Sampler& sampler() { return sampler_; }

  ChainSpec chain(cplx xi, bool periodic_only = false) const {
    ChainSpec spec;
    spec.n_sites = config_.n_sites;
    spec.params = TwistParams{xi, config_.eta};
    spec.boundary = periodic_only ? Boundary::periodic : config_.boundary;
    return spec;
  }

  cplx eta() const { return config_.eta; }
  int samples() const { return config_.samples; }

  /// Evaluates `residual` into a report; library errors become failed reports.
  VerificationReport& add(const std::string& id, Params params, double default_tol,
                          const std::function<double()>& residual,
                          CheckKind kind = CheckKind::check, std::string notes = {}) {
    const double tol = config_.tolerance(id, default_tol);
    try {
      reports_.push_back(make_report(id, std::move(params), residual(), tol, kind, std::move(notes)));
    } catch (const Error& e) {
      VerificationReport r = make_report(id, std::move(params),
                                         std::numeric_limits<double>::infinity(), tol,
                                         CheckKind::check, std::string("error: ") + e.what());
      r.pass = false;
      reports_.push_back(std::move(r));
    }
    return reports_.back();
  }

  void push(VerificationReport r) {
    r.tolerance = config_.tolerance(r.check_id, r.tolerance);
    if (r.kind == CheckKind::check) r.pass = r.residual <= r.tolerance;
    reports_.push_back(std::move(r));
  }

  void error(const std::string& id, Params params, const Error& e) {
    VerificationReport r = make_report(id, std::move(params),
                                       std::numeric_limits<double>::infinity(), 0.0,
                                       CheckKind::check, std::string("error: ") + e.what());
    r.pass = false;
    reports_.push_back(std::move(r));
  }

  /// Re-labels displayed relations that fail at every sample.
  void flag_misprints(const std::string& prefix, const std::string& note) {
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < reports_.size(); ++i) {
      if (reports_[i].check_id.rfind(prefix, 0) == 0 && reports_[i].kind == CheckKind::check) {
        groups[reports_[i].check_id].push_back(i);
      }
    }
    for (auto& [id, indices] : groups) {
      std::vector<VerificationReport> group;
      for (std::size_t i : indices) group.push_back(reports_[i]);
      if (flag_if_misprint(group, note)) {
        for (std::size_t k = 0; k < indices.size(); ++k) reports_[indices[k]] = group[k];
      }
    }
  }

  std::vector<VerificationReport> take() { return std::move(reports_); }

private:
  const RunConfig& config_;
  Sampler sampler_;
  std::vector<VerificationReport> reports_;
};

Params chain_params(const ChainSpec& spec, std::initializer_list<std::pair<std::string, cplx>> extra) {
  Params p = {{"N", static_cast<double>(spec.n_sites)}, {"xi", spec.params.xi}, {"eta", spec.params.eta}};
  p.insert(p.end(), extra.begin(), extra.end());
  return p;
}

// max_k |tr(a^k) − tr(b^k)| / max(‖a‖, ‖b‖)^k for k = 1..dim. Equal power
// sums mean equal spectra, and unlike eigenvalues they stay well conditioned
// at defective eigenvalues.
double power_sum_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  const double scale = std::max({a.norm(), b.norm(), 1e-300});
  const ComplexMatrix as = a / scale, bs = b / scale;
  ComplexMatrix pa = as, pb = bs;
  double worst = 0.0;
  for (Eigen::Index k = 1; k <= a.rows(); ++k) {
    worst = std::max(worst, std::abs(pa.trace() - pb.trace()));
    pa = pa * as;
    pb = pb * bs;
  }
  return worst;
}

const char* kMisprintNote = "fails at every sample; suspected misprint";

void run_ybe(Runner& run) {
  for (int i = 0; i < run.samples(); ++i) {
    const cplx xi = run.xi();
    const cplx u = run.spectral({0.0});
    const cplx v = run.spectral({0.0, u});
    const TwistParams params{xi, run.eta()};
    run.add("rmatrix.ybe", {{"xi", xi}, {"eta", run.eta()}, {"u", u}, {"v", v}}, 1e-12,
            [&] { return verify_ybe(u, v, params); });
  }
}

void run_twist(Runner& run) {
  const SpinRep half = make_spin_rep(0.5), one = make_spin_rep(1.0), three_half = make_spin_rep(1.5);
  for (const double xi : {0.0, 1.0, -2.0, 0.5}) {
    run.add("twist.universal_f12", {{"xi", xi}}, 0.0, [&] {
      return (universal_twist(half, half, xi) - build_f12(xi)).cwiseAbs().maxCoeff();
    });
  }
  for (int i = 0; i < run.samples(); ++i) {
    const cplx xi = run.xi();
    const cplx u = run.spectral({0.0});
    const TwistParams params{xi, run.eta()};
    const Params px = {{"xi", xi}};
    const Params pu = {{"xi", xi}, {"eta", run.eta()}, {"u", u}};

    run.add("rmatrix.construction.r_xi", px, 1e-13,
            [&] { return (build_r_xi(xi) - build_r_xi_product(xi)).norm(); });
    run.add("rmatrix.construction.r_u", pu, 1e-13,
            [&] { return (build_r(u, params) - build_r_twisted(u, params)).norm(); });
    run.add("rmatrix.regularity", {{"xi", xi}, {"eta", run.eta()}}, 1e-14,
            [&] { return verify_regularity(params).normalized_residual; });
    run.add("rmatrix.spectral_decomposition", px, 1e-13, [&] {
      const SpectralProjectors pr = spectral_projectors(xi);
      return (permutation_op() * build_r_xi(xi) - (pr.plus - pr.minus)).norm();
    });
    try {
      const UnitarityProbe probe = probe_unitarity(u, params);
      run.add("rmatrix.unitarity", pu, 0.0, [&] { return probe.deviation; }, CheckKind::observation,
              "R12(u)R21(-u) = " + format_complex(probe.scalar) + " I + deviation");
    } catch (const Error& e) {
      run.error("rmatrix.unitarity", pu, e);
    }
    run.add("twist.cocycle.half_half_half", px, 1e-12,
            [&] { return verify_cocycle(half, half, half, xi); });
    run.add("twist.cocycle.half_half_one", px, 1e-12,
            [&] { return verify_cocycle(half, half, one, xi); });
    for (const SpinRep* rep : {&half, &one, &three_half}) {
      run.add("twist.exp_sigma", {{"xi", xi}, {"spin", rep->spin}}, 1e-13, [&] {
        const ComplexMatrix lhs = nilpotent_exp(-sigma_element(*rep, xi));
        return (lhs - (identity(rep->dim) - 2.0 * xi * rep->e)).norm();
      });
    }
    run.add("twist.series", px, 1e-12, [&] {
      return std::max(relative_residual(universal_twist_series(half, one, xi), universal_twist(half, one, xi)),
                      relative_residual(universal_twist_series(one, three_half, xi),
                                        universal_twist(one, three_half, xi)));
    });
    run.add("twist.sigma_primitive", px, 1e-12,
            [&] { return twisted_sigma_primitivity(half, half, xi); });
    const bool trivial = xi == cplx{};
    run.add(
        "twist.delta_e_deformed", px, 1e-8,
        [&] {
          return relative_residual(twisted_coproduct(half, half, Generator::e, xi),
                                   primitive_coproduct(half, half, Generator::e));
        },
        trivial ? CheckKind::observation : CheckKind::expected_failure,
        trivial ? "xi = 0: coproducts coincide"
                : "the twisted coproduct of e differs from the primitive one");
  }
}

void run_rtt(Runner& run) {
  for (int i = 0; i < run.samples(); ++i) {
    const ChainSpec spec = run.chain(run.xi());
    const cplx u = run.spectral({0.0});
    const cplx v = run.spectral({0.0, u});
    const Params p = chain_params(spec, {{"u", u}, {"v", v}});
    run.add("chain.rtt", p, 1e-11, [&] { return verify_rtt(spec, u, v); });
    run.add("chain.transfer_commute", p, 1e-11, [&] {
      const ComplexMatrix tu = transfer_matrix(spec, u), tv = transfer_matrix(spec, v);
      return relative_residual(tu * tv, tv * tu);
    });
  }
}

void run_cr(Runner& run) {
  for (int i = 0; i < run.samples(); ++i) {
    const ChainSpec spec = run.chain(run.xi());
    const cplx eta = spec.params.eta;
    const cplx u = run.spectral({0.0});
    const cplx v = run.spectral({0.0, u, u - eta, u + eta});
    const Params p = chain_params(spec, {{"u", u}, {"v", v}});
    try {
      for (VerificationReport& r : verify_commutation_relations(spec, u, v)) run.push(std::move(r));
    } catch (const Error& e) {
      run.error("chain.cr.cr01", p, e);
    }
    run.add("chain.cr.rtt_components", p, 1e-11, [&] {
      double worst = 0.0;
      for (const auto& row : rtt_components(spec, u, v)) {
        for (double x : row) worst = std::max(worst, x);
      }
      return worst;
    });
  }
  run.flag_misprints("chain.cr.cr", kMisprintNote);
}

void run_spectrum(Runner& run) {
  if (run.chain(0.0).n_sites < 2) {
    run.add("chain.spectrum.hamiltonian", chain_params(run.chain(0.0), {}), 0.0, [] { return 0.0; },
            CheckKind::observation, "skipped: a single site has no bonds");
    return;
  }
  for (int i = 0; i < run.samples(); ++i) {
    const cplx xi = run.xi();
    const ChainSpec spec = run.chain(xi);
    const ChainSpec periodic = run.chain(xi, true);
    ChainSpec plain = spec;
    plain.params.xi = 0.0;
    const cplx u = run.spectral({0.0});
    const Params p = chain_params(spec, {{"u", u}});

    ComplexMatrix h, h0;
    try {
      h = build_hamiltonian(spec);
      h0 = build_hamiltonian(plain);
    } catch (const Error& e) {
      run.error("chain.spectrum.hamiltonian", p, e);
      continue;
    }
    const Spectrum eig_h = eigenvalues(h);
    const Spectrum eig_h0 = eigenvalues(h0);
    run.add("chain.spectrum.hamiltonian", p, 1e-8,
            [&] { return match_spectra(eig_h, eig_h0, 1e-8).max_pair_distance; }, CheckKind::check,
            std::string("boundary ") + to_string(spec.boundary));
    run.add("chain.spectrum.dense_only", p, 0.0,
            [&] { return match_spectra(eigenvalues_dense(h), eig_h0, 1e-8).max_pair_distance; },
            CheckKind::observation, "complex QR on the full matrix, no structural reduction");
    run.add("chain.spectrum.transfer", p, 1e-7, [&] {
      ChainSpec plain_periodic = periodic;
      plain_periodic.params.xi = 0.0;
      return match_spectra(eigenvalues(transfer_matrix(periodic, u)),
                           eigenvalues(transfer_matrix(plain_periodic, u)), 1e-7)
          .max_pair_distance;
    });
    run.add("chain.hamiltonian.grading", p, 1e-13,
            [&] { return strictly_lowering_residual(h - h0, spec.n_sites); });
    const bool real_xi = xi.imag() == 0.0;
    run.add(
        "chain.hamiltonian.real_spectrum", p, 1e-8,
        [&] {
          double worst = 0.0;
          for (const cplx z : eig_h) worst = std::max(worst, std::abs(z.imag()));
          return worst;
        },
        real_xi ? CheckKind::check : CheckKind::observation);
    run.add("chain.hamiltonian.non_hermitian", p, 0.0,
            [&] { return (h - h.adjoint()).cwiseAbs().maxCoeff(); }, CheckKind::observation,
            "max |H - H^dagger| entry");

    const Params pp = chain_params(periodic, {{"u", u}});
    HamiltonianPair pair;
    bool have_pair = false;
    try {
      pair = extract_hamiltonian(periodic);
      have_pair = true;
    } catch (const Error& e) {
      run.error("chain.hamiltonian.fit", pp, e);
    }
    if (!have_pair) continue;
    run.add("chain.hamiltonian.fit", pp, 1e-9, [&] { return pair.fit_residual; }, CheckKind::check,
            "a = " + format_complex(pair.scale_a) + ", b = " + format_complex(pair.shift_b));
    run.add(
        "chain.hamiltonian.printed_fit", pp, 0.0,
        [&] {
          HamiltonianOptions printed;
          printed.reading = HamiltonianReading::printed;
          return extract_hamiltonian(periodic, printed).fit_residual;
        },
        CheckKind::observation, "unit coefficients on the xi terms");
    run.add("chain.hamiltonian.commutes", pp, 1e-10, [&] {
      const ComplexMatrix t = transfer_matrix(periodic, u);
      return relative_residual(pair.h_model * t, t * pair.h_model);
    });
    run.add("chain.hamiltonian.derivative_cross_check", pp, 1e-6, [&] {
      const HamiltonianPair fd = extract_hamiltonian(periodic, {}, DerivativeMethod::central_difference);
      return relative_residual(fd.h_log, pair.h_log);
    });
  }
}

void run_bethe(Runner& run) {
  const ChainSpec spec = run.chain(run.xi(), true);
  const int n = spec.n_sites;
  const cplx eta = spec.params.eta;

  for (int i = 0; i < run.samples(); ++i) {
    const cplx u = run.spectral({0.0});
    const cplx v = run.spectral({0.0, u, eta});
    run.add("chain.vacuum", chain_params(spec, {{"u", u}}), 1e-11, [&] {
      const MonodromyBlocks t = build_monodromy(spec, u);
      const ComplexVector omega = all_down(n);
      const double d = std::max((t.a * omega - omega).norm(),
                                (t.d * omega - vacuum_d(u, n, eta) * omega).norm());
      return std::max(d, (t.b * omega).norm());
    });
    run.add("bethe.one_magnon.action", chain_params(spec, {{"u", u}, {"v", v}}), 1e-11,
            [&] { return verify_one_magnon_action(spec, u, v); });
  }

  std::vector<BetheState> states = {BetheState{n, 0, {}, 0.0, eta}};
  const cplx probe_u = run.spectral({0.0, eta});
  for (const cplx root : one_magnon_roots(n, eta)) {
    const Params p = chain_params(spec, {{"v0", root}});
    try {
      const BetheState s = solve_bethe(n, 1, eta, {root});
      states.push_back(s);
      run.add("bethe.one_magnon.root", p, 1e-12,
              [&] { return std::max(s.residual, std::abs(s.roots[0] - root)); });
      run.add("bethe.one_magnon.eigenvector", chain_params(spec, {{"v", root}, {"u", probe_u}}), 1e-10,
              [&] { return eigenvector_defect(spec, s, probe_u); });
    } catch (const Error& e) {
      run.error("bethe.one_magnon.root", p, e);
    }
  }

  std::vector<BetheState> pairs;
  if (n >= 2) pairs = solve_two_magnon(n, eta);
  run.add("bethe.two_magnon.solutions", chain_params(spec, {}), 0.0, [] { return 0.0; },
          CheckKind::observation,
          std::to_string(pairs.size()) + " distinct regular solutions from " +
              std::to_string(two_magnon_seeds(n, eta).size()) + " seeds");
  for (const BetheState& s : pairs) {
    const Params p = chain_params(spec, {{"v1", s.roots[0]}, {"v2", s.roots[1]}});
    states.push_back(s);
    run.add("bethe.two_magnon.root", p, 1e-12, [&] { return s.residual; });
    run.add("bethe.tq", p, 1e-10, [&] {
      double worst = 0.0;
      for (int k = 0; k < 10; ++k) {
        worst = std::max(worst, verify_tq(s, run.spectral({0.0, s.roots[0], s.roots[1],
                                                           s.roots[0] + eta, s.roots[1] + eta})));
      }
      return worst;
    });
    run.add("bethe.residue", p, 1e-9, [&] {
      double worst = 0.0;
      for (int j = 0; j < s.magnons; ++j) worst = std::max(worst, std::abs(lambda_residue(s, j)));
      return worst;
    });
    run.add("bethe.idempotence", p, 1e-12, [&] {
      const BetheState again = solve_bethe(n, s.magnons, eta, s.roots);
      double worst = 0.0;
      for (int j = 0; j < s.magnons; ++j) {
        worst = std::max(worst, std::abs(again.roots[static_cast<std::size_t>(j)] -
                                         s.roots[static_cast<std::size_t>(j)]));
      }
      return worst;
    });
    run.add(
        "bethe.conjugation", p, 1e-10,
        [&] {
          BetheState conj = s;
          for (cplx& z : conj.roots) z = std::conj(z);
          const std::vector<double> d = bethe_defect(conj);
          return *std::max_element(d.begin(), d.end());
        },
        eta.imag() == 0.0 ? CheckKind::check : CheckKind::observation,
        "conjugated roots solve the same equations");
  }

  for (int i = 0; i < run.samples(); ++i) {
    std::vector<cplx> avoid = {0.0, eta};
    for (const auto& s : states) {
      for (const cplx z : s.roots) {
        avoid.push_back(z);
        avoid.push_back(z + eta);
      }
    }
    const cplx u = run.spectral(avoid);
    if (pairs.empty()) break;
    try {
      MultiMagnonReports r = verify_multi_magnon_spectrum(spec, pairs, u);
      run.push(std::move(r.eigenvalue));
      run.push(std::move(r.eigenvector));
    } catch (const Error& e) {
      run.error("bethe.multi_magnon.eigenvalue", chain_params(spec, {{"u", u}}), e);
    }
  }

  run.add(
      "bethe.completeness", chain_params(spec, {{"u", probe_u}}), 0.0,
      [&] {
        double missing = 0.0;
        for (const SectorCount& c : sector_accounting(spec, states, probe_u, std::min(2, n))) {
          missing += c.dimension - c.accounted;
        }
        return missing;
      },
      CheckKind::observation, [&] {
        std::string notes = "accounted/dimension per magnon sector:";
        try {
          for (const SectorCount& c : sector_accounting(spec, states, probe_u, std::min(2, n))) {
            notes += " M=" + std::to_string(c.magnons) + " " + std::to_string(c.accounted) + "/" +
                     std::to_string(c.dimension);
          }
        } catch (const Error&) {
        }
        return notes;
      }());
}

void run_symmetry(Runner& run) {
  for (int i = 0; i < run.samples(); ++i) {
    const ChainSpec spec = run.chain(run.xi());
    const cplx u = run.spectral({0.0});
    const Params p = chain_params(spec, {{"u", u}});
    try {
      for (VerificationReport& r : verify_symmetry_relations(spec, u)) run.push(std::move(r));
    } catch (const Error& e) {
      run.error("symmetry.relation.eg", p, e);
    }
    const Params p0 = chain_params(spec, {});
    AsymptoticData t0;
    try {
      t0 = extract_t0(spec);
    } catch (const Error& e) {
      run.error("symmetry.t0_zero_block", p0, e);
      continue;
    }
    run.add("symmetry.t0_zero_block", p0, 1e-13, [&] { return t0.zero_block_residual; });
    run.add("symmetry.t0_inverse", p0, 1e-12, [&] { return t0.inverse_residual; });
    run.add("symmetry.e_commutes_t", p, 1e-11, [&] { return e_transfer_commutator(spec, u); });
    run.add("symmetry.unipotent", p0, 1e-10, [&] { return unipotency_residual(spec); });
    run.add("symmetry.order1.ordered_with_eta", p0, 1e-12,
            [&] { return order1_residual(spec, Order1Reading::ordered_with_eta); });
    run.add("symmetry.order1.ordered", p0, 0.0,
            [&] { return order1_residual(spec, Order1Reading::ordered); }, CheckKind::observation,
            "ordered products without the -eta factor");
    run.add("symmetry.order1.literal", p0, 0.0,
            [&] { return order1_residual(spec, Order1Reading::literal); }, CheckKind::observation,
            "index pattern M_k P_ak M_{N-k-1} read literally");
    if (i < 5) {
      for (const auto& [n1, n2] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{2, 2}}) {
        try {
          run.push(verify_coproducts(n1, n2, spec.params.xi));
        } catch (const Error& e) {
          run.error("symmetry.coproduct", p0, e);
        }
      }
    }
  }
  run.flag_misprints("symmetry.relation.", kMisprintNote);
}

void run_fusion(Runner& run) {
  for (int i = 0; i < run.samples(); ++i) {
    const ChainSpec spec = run.chain(run.xi());
    const cplx eta = spec.params.eta;
    const std::vector<cplx> poles = {0.0, eta, 2.0 * eta, 3.0 * eta};
    const cplx u = run.spectral(poles);
    std::vector<cplx> avoid_v = poles;
    avoid_v.push_back(u);
    const cplx v = run.spectral(avoid_v);
    const Params p = chain_params(spec, {{"u", u}});
    const Params pv = chain_params(spec, {{"u", u}, {"v", v}});

    run.add("fusion.relation.l1", p, 1e-9, [&] { return verify_fusion_relation(spec, 1, u); });
    run.add("fusion.relation.l2", p, 1e-9, [&] { return verify_fusion_relation(spec, 2, u); });
    run.add("fusion.standard.l1", p, 1e-10, [&] { return verify_standard_recursion(spec, 1, u); });
    run.add("fusion.standard.l2", p, 1e-10, [&] { return verify_standard_recursion(spec, 2, u); });
    run.add("fusion.invariance.l2", p, 1e-11, [&] { return fused_invariance_residual(spec, 2, u); });
    run.add("fusion.invariance.l3", p, 1e-11, [&] { return fused_invariance_residual(spec, 3, u); });
    run.add("fusion.projector", chain_params(spec, {}), 1e-11,
            [&] { return projector_consistency(spec.params.xi, eta); });
    run.add("fusion.level1_identity", p, 0.0,
            [&] { return (fused_transfer(spec, 1, u) - transfer_matrix(spec, u)).norm(); });
    run.add("fusion.level0_scalar", p, 1e-15, [&] {
      const ComplexMatrix t0 = fused_transfer(spec, 0, u);
      const cplx scalar = t0(0, 0);
      return relative_residual(t0, scalar * identity(spec.dim()));
    });
    for (int level : {2, 3}) {
      run.add("fusion.commute.l" + std::to_string(level), pv, 1e-9, [&] {
        const ComplexMatrix a = fused_transfer_standard(spec, level, u);
        const ComplexMatrix b = transfer_matrix(spec, v);
        return relative_residual(a * b, b * a);
      });
    }
    {
      ChainSpec plain = spec;
      plain.params.xi = 0.0;
      run.add("fusion.spectrum", p, 1e-10, [&] {
        double worst = 0.0;
        for (int level : {2, 3}) {
          worst = std::max(worst, power_sum_distance(fused_transfer_standard(spec, level, u),
                                                     fused_transfer_standard(plain, level, u)));
        }
        return worst;
      }, CheckKind::check, "power sums tr(M^k), k = 1..dim, of the fused matrices at xi and at xi = 0");
    }
  }
  run.flag_misprints("fusion.relation.", kMisprintNote);
}

}  // namespace

std::vector<VerificationReport> run_suite(const RunConfig& config, Suite suite) {
  config.validate();
  if (suite == Suite::all) {
    std::vector<VerificationReport> out;
    for (Suite s : concrete_suites()) {
      std::vector<VerificationReport> part = run_suite(config, s);
      out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return out;
  }
  Runner run(config, suite);
  switch (suite) {
    case Suite::ybe: run_ybe(run); break;
    case Suite::twist: run_twist(run); break;
    case Suite::rtt: run_rtt(run); break;
    case Suite::cr: run_cr(run); break;
    case Suite::spectrum: run_spectrum(run); break;
    case Suite::bethe: run_bethe(run); break;
    case Suite::symmetry: run_symmetry(run); break;
    case Suite::fusion: run_fusion(run); break;
    case Suite::all: break;
  }
  return run.take();
}

bool any_gating_failure(const std::vector<VerificationReport>& reports) {
  return std::any_of(reports.begin(), reports.end(),
                     [](const VerificationReport& r) { return r.gating_failure(); });
}

// ---------------------------------------------------------------------------
// Serialisation

namespace {

std::string json_number(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string json_string(std::string_view s) {
  std::string out = "\"";
  for (const char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out + "\"";
}

std::string json_complex(cplx z) {
  return "{\"re\":" + json_number(z.real()) + ",\"im\":" + json_number(z.imag()) + "}";
}

}  // namespace

std::string to_json(const RunConfig& config, const std::vector<VerificationReport>& reports) {
  std::string out = "{\n";
  out += "  \"version\": " + json_string(kReportVersion) + ",\n";
  out += "  \"seed\": " + std::to_string(config.seed) + ",\n";
  out += "  \"config\": {";
  out += "\"n_sites\":" + std::to_string(config.n_sites);
  out += ",\"xi\":" + (config.xi ? json_complex(*config.xi) : std::string("null"));
  out += ",\"eta\":" + json_complex(config.eta);
  out += ",\"boundary\":" + json_string(to_string(config.boundary));
  out += ",\"samples\":" + std::to_string(config.samples);
  out += ",\"complex_xi\":" + std::string(config.complex_xi ? "true" : "false");
  out += ",\"tolerances\":{";
  bool first = true;
  for (const auto& [key, tol] : config.tolerances) {
    if (!first) out += ",";
    first = false;
    out += json_string(key) + ":" + json_number(tol);
  }
  out += "}},\n";
  out += "  \"reports\": [";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const VerificationReport& r = reports[i];
    out += i == 0 ? "\n    {" : ",\n    {";
    out += "\"check_id\":" + json_string(r.check_id);
    out += ",\"kind\":" + json_string(to_string(r.kind));
    out += ",\"params\":{";
    for (std::size_t k = 0; k < r.params.size(); ++k) {
      if (k > 0) out += ",";
      out += json_string(r.params[k].first) + ":" + json_complex(r.params[k].second);
    }
    out += "},\"residual\":" + json_number(r.residual);
    out += ",\"tolerance\":" + json_number(r.tolerance);
    out += ",\"pass\":" + std::string(r.pass ? "true" : "false");
    out += ",\"notes\":" + json_string(r.notes) + "}";
  }
  out += reports.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

std::string to_csv(const std::vector<VerificationReport>& reports) {
  std::string out = "check_id,param_summary,residual,tolerance,pass\n";
  for (const VerificationReport& r : reports) {
    char nums[96];
    std::snprintf(nums, sizeof nums, "%.17g,%.17g", r.residual, r.tolerance);
    out += r.check_id + "," + param_summary(r.params) + "," + nums + "," +
           (r.pass ? "true" : "false") + "\n";
  }
  return out;
}

void emit_report(const RunConfig& config, const std::vector<VerificationReport>& reports,
                 ReportFormat format, const std::string& path) {
  const std::string text = format == ReportFormat::json ? to_json(config, reports) : to_csv(reports);
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw Error("failed to write report to standard output");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw Error("failed to write '" + path + "'");
}

// ---------------------------------------------------------------------------
// Catalog

const std::vector<CatalogEntry>& check_catalog() {
  static const std::vector<CatalogEntry> catalog = [] {
    std::vector<CatalogEntry> c = {
        {"rmatrix.ybe", Suite::ybe},
        {"twist.universal_f12", Suite::twist},
        {"rmatrix.construction.r_xi", Suite::twist},
        {"rmatrix.construction.r_u", Suite::twist},
        {"rmatrix.regularity", Suite::twist},
        {"rmatrix.spectral_decomposition", Suite::twist},
        {"rmatrix.unitarity", Suite::twist},
        {"twist.cocycle.half_half_half", Suite::twist},
        {"twist.cocycle.half_half_one", Suite::twist},
        {"twist.exp_sigma", Suite::twist},
        {"twist.series", Suite::twist},
        {"twist.sigma_primitive", Suite::twist},
        {"twist.delta_e_deformed", Suite::twist},
        {"chain.rtt", Suite::rtt},
        {"chain.transfer_commute", Suite::rtt},
        {"chain.cr.rtt_components", Suite::cr},
        {"chain.spectrum.hamiltonian", Suite::spectrum},
        {"chain.spectrum.dense_only", Suite::spectrum},
        {"chain.spectrum.transfer", Suite::spectrum},
        {"chain.hamiltonian.grading", Suite::spectrum},
        {"chain.hamiltonian.real_spectrum", Suite::spectrum},
        {"chain.hamiltonian.non_hermitian", Suite::spectrum},
        {"chain.hamiltonian.fit", Suite::spectrum},
        {"chain.hamiltonian.printed_fit", Suite::spectrum},
        {"chain.hamiltonian.commutes", Suite::spectrum},
        {"chain.hamiltonian.derivative_cross_check", Suite::spectrum},
        {"chain.vacuum", Suite::bethe},
        {"bethe.one_magnon.action", Suite::bethe},
        {"bethe.one_magnon.root", Suite::bethe},
        {"bethe.one_magnon.eigenvector", Suite::bethe},
        {"bethe.two_magnon.solutions", Suite::bethe},
        {"bethe.two_magnon.root", Suite::bethe},
        {"bethe.tq", Suite::bethe},
        {"bethe.residue", Suite::bethe},
        {"bethe.idempotence", Suite::bethe},
        {"bethe.conjugation", Suite::bethe},
        {"bethe.multi_magnon.eigenvalue", Suite::bethe},
        {"bethe.multi_magnon.eigenvector", Suite::bethe},
        {"bethe.completeness", Suite::bethe},
        {"symmetry.t0_zero_block", Suite::symmetry},
        {"symmetry.t0_inverse", Suite::symmetry},
        {"symmetry.e_commutes_t", Suite::symmetry},
        {"symmetry.unipotent", Suite::symmetry},
        {"symmetry.order1.ordered_with_eta", Suite::symmetry},
        {"symmetry.order1.ordered", Suite::symmetry},
        {"symmetry.order1.literal", Suite::symmetry},
        {"symmetry.coproduct", Suite::symmetry},
        {"fusion.relation.l1", Suite::fusion},
        {"fusion.relation.l2", Suite::fusion},
        {"fusion.standard.l1", Suite::fusion},
        {"fusion.standard.l2", Suite::fusion},
        {"fusion.invariance.l2", Suite::fusion},
        {"fusion.invariance.l3", Suite::fusion},
        {"fusion.projector", Suite::fusion},
        {"fusion.level1_identity", Suite::fusion},
        {"fusion.level0_scalar", Suite::fusion},
        {"fusion.commute.l2", Suite::fusion},
        {"fusion.commute.l3", Suite::fusion},
        {"fusion.spectrum", Suite::fusion},
    };
    for (const auto& rel : commutation_relations()) c.push_back({"chain.cr." + rel.id, Suite::cr});
    for (const auto& rel : symmetry_relations()) {
      c.push_back({"symmetry.relation." + rel.id, Suite::symmetry});
    }
    return c;
  }();
  return catalog;
}

}  // namespace twistlab
