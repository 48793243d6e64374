#pragma once

// Seeded verification suites and their serialisation.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "twistlab/chain.hpp"
#include "twistlab/report.hpp"

namespace twistlab {

inline constexpr const char* kReportVersion = "1.0";
inline constexpr std::uint64_t kDefaultSeed = 20240917;
inline constexpr const char* kSeedEnvVar = "TWISTLAB_SEED";

enum class Suite { ybe, rtt, cr, spectrum, bethe, symmetry, fusion, twist, all };

const char* to_string(Suite s);
std::optional<Suite> parse_suite(std::string_view name);

/// Every concrete suite, in the order `all` runs them.
const std::vector<Suite>& concrete_suites();

/// Parses "a", "a+bi", "a-bi", "bi", "-bi", "i" with decimal reals.
/// Throws DomainError on anything else.
cplx parse_complex(std::string_view text);

struct RunConfig {
  std::uint64_t seed = kDefaultSeed;
  int n_sites = 4;
  std::optional<cplx> xi;  // sampled when absent
  cplx eta{1.0};
  Boundary boundary = Boundary::periodic;
  int samples = 100;
  bool complex_xi = false;  // sample ξ from the unit disk instead of [−1, 1]
  std::map<std::string, double> tolerances;

  void validate() const;

  /// Override for `check_id` or its longest dotted prefix, else `fallback`.
  double tolerance(const std::string& check_id, double fallback) const;
};

/// Seed from TWISTLAB_SEED if set and numeric, otherwise kDefaultSeed.
std::uint64_t default_seed();

/// Applies "key = value" lines ('#' starts a comment) on top of `base`.
/// Keys: seed, n_sites, xi, eta, boundary, samples, complex_xi, tol.<check>.
RunConfig parse_config(std::string_view text, RunConfig base);
RunConfig load_config_file(const std::string& path, RunConfig base);

/// Deterministic sampler: std::mt19937_64 with hand-mapped uniforms, so the
/// stream does not depend on the standard library's distributions.
class Sampler {
public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi);
  /// ξ from [−1, 1], or from the unit disk when `complex_disk`.
  cplx xi(bool complex_disk);
  /// A point of the annulus 0.5 <= |z| <= 5 at distance >= 0.1 from every
  /// point in `avoid`.
  cplx spectral(const std::vector<cplx>& avoid = {});

private:
  std::mt19937_64 engine_;
};

std::vector<VerificationReport> run_suite(const RunConfig& config, Suite suite);

bool any_gating_failure(const std::vector<VerificationReport>& reports);

/// {version, seed, config, reports} with fixed key order and 17 significant
/// digits per number.
std::string to_json(const RunConfig& config, const std::vector<VerificationReport>& reports);

/// Header check_id,param_summary,residual,tolerance,pass and one row per report.
std::string to_csv(const std::vector<VerificationReport>& reports);

enum class ReportFormat { json, csv };

/// Writes to `path`, or to standard output when `path` is empty or "-".
void emit_report(const RunConfig& config, const std::vector<VerificationReport>& reports,
                 ReportFormat format, const std::string& path);

struct CatalogEntry {
  std::string check_id;
  Suite suite;
};

/// Every check id a suite can emit, with the suite that owns it.
const std::vector<CatalogEntry>& check_catalog();

}  // namespace twistlab
