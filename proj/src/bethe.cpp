#include "twistlab/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "twistlab/errors.hpp"

namespace twistlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_roots(const std::vector<cplx>& v, cplx eta, double min_separation) {
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (std::abs(v[j]) <= min_separation || std::abs(v[j] - eta) <= min_separation) {
      throw DomainError("Bethe root on a pole of the vacuum term");
    }
    for (std::size_t k = 0; k < j; ++k) {
      const cplx diff = v[k] - v[j];
      if (std::abs(diff) <= min_separation) throw DomainError("coincident Bethe roots");
      if (std::abs(diff - eta) <= min_separation || std::abs(diff + eta) <= min_separation) {
        throw DomainError("Bethe roots separated by exactly eta");
      }
    }
  }
}

// Logarithmic equations with each component shifted by the nearest multiple
// of 2πi.
ComplexVector log_equations(const std::vector<cplx>& v, int n_sites, cplx eta) {
  const auto m = static_cast<Eigen::Index>(v.size());
  ComplexVector f(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    cplx value = static_cast<double>(n_sites) * std::log((v[j] - eta) / v[j]);
    for (Eigen::Index k = 0; k < m; ++k) {
      if (k == j) continue;
      const cplx diff = v[k] - v[j];
      value -= std::log((diff + eta) / (diff - eta));
    }
    value -= cplx{0.0, kTwoPi * std::round(value.imag() / kTwoPi)};
    f(j) = value;
  }
  return f;
}

ComplexMatrix log_jacobian(const std::vector<cplx>& v, int n_sites, cplx eta) {
  const auto m = static_cast<Eigen::Index>(v.size());
  ComplexMatrix jac = ComplexMatrix::Zero(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    jac(j, j) = static_cast<double>(n_sites) * (1.0 / (v[j] - eta) - 1.0 / v[j]);
    for (Eigen::Index k = 0; k < m; ++k) {
      if (k == j) continue;
      const cplx diff = v[k] - v[j];
      const cplx g = 1.0 / (diff + eta) - 1.0 / (diff - eta);
      jac(j, j) += g;
      jac(j, k) = -g;
    }
  }
  return jac;
}

bool admissible(const std::vector<cplx>& v, cplx eta, const BetheSolverOptions& options) {
  try {
    check_roots(v, eta, options.min_separation);
  } catch (const DomainError&) {
    return false;
  }
  return std::all_of(v.begin(), v.end(), [&](cplx z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag()) && std::abs(z) < options.escape_radius;
  });
}

struct NewtonOutcome {
  std::vector<cplx> roots;
  double residual = 0.0;
  bool converged = false;
  bool collided = false;
};

NewtonOutcome newton(int n_sites, cplx eta, std::vector<cplx> v, const BetheSolverOptions& options) {
  NewtonOutcome out;
  if (!admissible(v, eta, options)) {
    out.roots = std::move(v);
    out.collided = true;
    return out;
  }
  ComplexVector f = log_equations(v, n_sites, eta);
  double norm = f.cwiseAbs().maxCoeff();
  for (int it = 0; it < options.max_iterations && norm >= options.tolerance; ++it) {
    const ComplexVector step = log_jacobian(v, n_sites, eta).fullPivLu().solve(-f);
    double scale = 1.0;
    std::vector<cplx> trial;
    ComplexVector trial_f;
    double trial_norm = 0.0;
    bool accepted = false;
    for (int h = 0; h <= options.max_halvings; ++h, scale *= 0.5) {
      trial = v;
      for (std::size_t j = 0; j < v.size(); ++j) trial[j] += scale * step(static_cast<Eigen::Index>(j));
      if (!admissible(trial, eta, options)) continue;
      trial_f = log_equations(trial, n_sites, eta);
      trial_norm = trial_f.cwiseAbs().maxCoeff();
      accepted = true;
      if (trial_norm < norm) break;
    }
    if (!accepted) {
      out.roots = std::move(v);
      out.residual = norm;
      out.collided = true;
      return out;
    }
    v = std::move(trial);
    f = std::move(trial_f);
    norm = trial_norm;
  }
  out.roots = std::move(v);
  out.residual = norm;
  out.converged = norm < options.tolerance;
  return out;
}

}  // namespace

std::vector<double> bethe_defect(const BetheState& state) {
  check_roots(state.roots, state.eta, 0.0);
  const ComplexVector f = log_equations(state.roots, state.n_sites, state.eta);
  std::vector<double> out(state.roots.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = std::abs(f(static_cast<Eigen::Index>(j)));
  return out;
}

BetheState solve_bethe(int n_sites, int magnons, cplx eta, const std::vector<cplx>& seeds,
                       const BetheSolverOptions& options) {
  if (n_sites < 1 || magnons < 0 || magnons > n_sites) {
    throw DomainError("solve_bethe: need 0 <= magnons <= n_sites");
  }
  if (static_cast<int>(seeds.size()) != magnons) {
    throw DomainError("solve_bethe: one seed per magnon required");
  }
  NewtonOutcome outcome = newton(n_sites, eta, seeds, options);
  if (outcome.collided) {
    std::vector<cplx> perturbed = seeds;
    for (std::size_t j = 0; j < perturbed.size(); ++j) {
      perturbed[j] += 1e-3 * static_cast<double>(j + 1) * cplx{1.0, 0.7} * eta;
    }
    outcome = newton(n_sites, eta, perturbed, options);
  }
  if (!outcome.converged) {
    throw ConvergenceError(outcome.collided ? "solve_bethe: roots collided or escaped"
                                            : "solve_bethe: no convergence",
                           outcome.roots, outcome.residual);
  }
  BetheState state{n_sites, magnons, std::move(outcome.roots), outcome.residual, eta};
  const std::vector<double> defects = bethe_defect(state);
  state.residual = defects.empty() ? 0.0 : *std::max_element(defects.begin(), defects.end());
  return state;
}

std::vector<cplx> one_magnon_roots(int n_sites, cplx eta) {
  std::vector<cplx> out;
  for (int k = 1; k < n_sites; ++k) {
    const cplx omega = std::polar(1.0, kTwoPi * k / n_sites);
    out.push_back(eta / (1.0 - omega));
  }
  return out;
}

std::vector<std::vector<cplx>> two_magnon_seeds(int n_sites, cplx eta) {
  const std::vector<cplx> single = one_magnon_roots(n_sites, eta);
  std::vector<std::vector<cplx>> out;
  for (std::size_t a = 0; a < single.size(); ++a) {
    for (std::size_t b = a + 1; b < single.size(); ++b) out.push_back({single[a], single[b]});
  }
  const cplx half_i = cplx{0.0, 0.5} * eta;
  for (const cplx r : single) out.push_back({r + half_i, r - half_i});
  return out;
}

namespace {

bool same_root_set(std::vector<cplx> a, std::vector<cplx> b, double tol) {
  if (a.size() != b.size()) return false;
  for (const cplx z : a) {
    auto it = std::find_if(b.begin(), b.end(), [&](cplx w) { return std::abs(z - w) < tol; });
    if (it == b.end()) return false;
    b.erase(it);
  }
  return true;
}

}  // namespace

std::vector<BetheState> solve_two_magnon(int n_sites, cplx eta, const BetheSolverOptions& options) {
  std::vector<BetheState> out;
  for (const auto& seed : two_magnon_seeds(n_sites, eta)) {
    try {
      BetheState s = solve_bethe(n_sites, 2, eta, seed, options);
      const bool seen = std::any_of(out.begin(), out.end(), [&](const BetheState& o) {
        return same_root_set(o.roots, s.roots, 1e-8);
      });
      if (!seen) out.push_back(std::move(s));
    } catch (const ConvergenceError&) {
    }
  }
  return out;
}

cplx eval_lambda(cplx u, const BetheState& state) {
  cplx first = 1.0, second = vacuum_d(u, state.n_sites, state.eta);
  for (const cplx v : state.roots) {
    if (u == v || u == v + state.eta) throw DomainError("eval_lambda: pole argument");
    first *= alpha(u, v, state.eta);
    second *= alpha(v, u, state.eta);
  }
  return first + second;
}

cplx q_function(cplx u, const BetheState& state) {
  cplx q = 1.0;
  for (const cplx v : state.roots) q *= u - v;
  return q;
}

double verify_tq(const BetheState& state, cplx u) {
  const cplx lhs = eval_lambda(u, state) * q_function(u, state);
  const cplx rhs = q_function(u - state.eta, state) +
                   vacuum_d(u, state.n_sites, state.eta) * q_function(u + state.eta, state);
  return std::abs(lhs - rhs) / std::max(std::abs(lhs), 1.0);
}

cplx lambda_residue(const BetheState& state, int root_index, double radius, int points) {
  const cplx centre = state.roots.at(static_cast<std::size_t>(root_index));
  cplx sum = 0.0;
  for (int k = 0; k < points; ++k) {
    const cplx offset = std::polar(radius, kTwoPi * k / points);
    // (1/2πi)∮Λ du with du = i·offset·dθ.
    sum += eval_lambda(centre + offset, state) * offset;
  }
  return sum / static_cast<double>(points);
}

ComplexVector bethe_vector(const ChainSpec& spec, const std::vector<cplx>& roots) {
  ComplexVector psi = all_down(spec.n_sites);
  for (auto it = roots.rbegin(); it != roots.rend(); ++it) {
    psi = build_monodromy(spec, *it).c * psi;
  }
  return psi;
}

double verify_one_magnon_action(const ChainSpec& spec, cplx u, cplx v) {
  if (u == v) throw DomainError("verify_one_magnon_action: u and v must differ");
  const cplx eta = spec.params.eta;
  const cplx xi = spec.params.xi;
  const MonodromyBlocks tu = build_monodromy(spec, u);
  const ComplexVector omega = all_down(spec.n_sites);
  const ComplexVector cv = build_monodromy(spec, v).c * omega;
  const ComplexVector cu = tu.c * omega;
  const cplx du = vacuum_d(u, spec.n_sites, eta);
  const cplx dv = vacuum_d(v, spec.n_sites, eta);

  const ComplexVector lhs = (tu.a + tu.d) * cv;
  const ComplexVector rhs = (alpha(u, v, eta) + du * alpha(v, u, eta)) * cv -
                            (beta(u, v, eta) + beta(v, u, eta) * dv) * cu +
                            xi * (1.0 - du) * (1.0 - dv) * omega;
  return relative_residual(lhs, rhs);
}

double eigenvector_defect(const ChainSpec& spec, const BetheState& state, cplx u) {
  const ComplexVector psi = bethe_vector(spec, state.roots);
  const ComplexVector image = transfer_matrix(spec, u) * psi;
  return relative_residual(image, eval_lambda(u, state) * psi);
}

MultiMagnonReports verify_multi_magnon_spectrum(const ChainSpec& spec,
                                                const std::vector<BetheState>& states, cplx u,
                                                double spectrum_tol, double floor,
                                                double control_tol) {
  const Spectrum exact = eigenvalues(transfer_matrix(spec, u));
  ChainSpec plain = spec;
  plain.params.xi = 0.0;

  int max_magnons = 0;
  double worst_distance = 0.0;
  double min_defect = std::numeric_limits<double>::infinity();
  double max_defect = 0.0;
  double max_control = 0.0;
  double max_single_defect = 0.0;  // states with M <= 1 stay eigenvectors
  for (const auto& s : states) {
    max_magnons = std::max(max_magnons, s.magnons);
    worst_distance = std::max(worst_distance, distance_to_spectrum(eval_lambda(u, s), exact));
    const double defect = eigenvector_defect(spec, s, u);
    max_defect = std::max(max_defect, defect);
    if (s.magnons >= 2) {
      min_defect = std::min(min_defect, defect);
      max_control = std::max(max_control, eigenvector_defect(plain, s, u));
    } else {
      max_single_defect = std::max(max_single_defect, defect);
    }
  }
  if (max_magnons < 2) min_defect = 0.0;

  const std::vector<std::pair<std::string, cplx>> params = {
      {"N", static_cast<double>(spec.n_sites)},
      {"M", static_cast<double>(max_magnons)},
      {"xi", spec.params.xi},
      {"eta", spec.params.eta},
      {"u", u}};
  MultiMagnonReports out;
  out.eigenvalue = make_report("bethe.multi_magnon.eigenvalue", params, worst_distance, spectrum_tol);

  char buf[160];
  const bool deformed = max_magnons >= 2 && spec.params.xi != cplx{};
  if (deformed) {
    std::snprintf(buf, sizeof buf,
                  "product state is not an eigenvector: defect must exceed the floor; "
                  "xi=0 control defect %.3e (must be < %.0e)",
                  max_control, control_tol);
    out.eigenvector = make_report("bethe.multi_magnon.eigenvector", params, min_defect, floor,
                                  CheckKind::expected_failure, buf);
    if (!(max_control < control_tol) || !(max_single_defect < control_tol)) {
      out.eigenvector.pass = false;
    }
  } else {
    std::snprintf(buf, sizeof buf, "product state is an eigenvector");
    out.eigenvector = make_report("bethe.multi_magnon.eigenvector", params, max_defect, control_tol,
                                  CheckKind::check, buf);
  }
  return out;
}

std::vector<SectorCount> sector_accounting(const ChainSpec& spec, const std::vector<BetheState>& states,
                                           cplx u, int max_magnons, double tol) {
  // The undeformed transfer matrix preserves the magnon number, and its
  // spectrum equals the deformed one.
  ChainSpec plain = spec;
  plain.params.xi = 0.0;
  const ComplexMatrix t = transfer_matrix(plain, u);
  const int n = spec.n_sites;

  std::vector<SectorCount> out;
  for (int m = 0; m <= max_magnons; ++m) {
    std::vector<Eigen::Index> index;
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      if ((total_sz(i, n) + n) / 2 == m) index.push_back(i);
    }
    const auto k = static_cast<Eigen::Index>(index.size());
    ComplexMatrix block(k, k);
    for (Eigen::Index r = 0; r < k; ++r) {
      for (Eigen::Index c = 0; c < k; ++c) block(r, c) = t(index[static_cast<std::size_t>(r)],
                                                           index[static_cast<std::size_t>(c)]);
    }
    Spectrum candidates;
    for (const auto& s : states) {
      if (s.magnons <= m) candidates.push_back(eval_lambda(u, s));
    }
    SectorCount count{m, static_cast<int>(k), 0};
    for (const cplx z : eigenvalues(block)) {
      if (!candidates.empty() && distance_to_spectrum(z, candidates) < tol) ++count.accounted;
    }
    out.push_back(count);
  }
  return out;
}

}  // namespace twistlab
