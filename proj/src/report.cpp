#include "twistlab/report.hpp"

#include <cstdio>

namespace twistlab {

const char* to_string(CheckKind kind) {
  switch (kind) {
    case CheckKind::check: return "check";
    case CheckKind::expected_failure: return "expected_failure";
    case CheckKind::suspected_misprint: return "suspected_misprint";
    case CheckKind::observation: return "observation";
  }
  return "check";
}

bool VerificationReport::gating_failure() const {
  return !pass && (kind == CheckKind::check || kind == CheckKind::expected_failure);
}

VerificationReport make_report(std::string check_id,
                               std::vector<std::pair<std::string, cplx>> params, double residual,
                               double tolerance, CheckKind kind, std::string notes) {
  VerificationReport r;
  r.check_id = std::move(check_id);
  r.params = std::move(params);
  r.residual = residual;
  r.tolerance = tolerance;
  r.kind = kind;
  r.notes = std::move(notes);
  switch (kind) {
    case CheckKind::check: r.pass = residual <= tolerance; break;
    case CheckKind::expected_failure: r.pass = residual > tolerance; break;
    case CheckKind::suspected_misprint:
    case CheckKind::observation: r.pass = true; break;
  }
  return r;
}

bool flag_if_misprint(std::vector<VerificationReport>& group, const std::string& note) {
  if (group.empty()) return false;
  for (const auto& r : group) {
    if (r.residual <= r.tolerance) return false;
  }
  for (auto& r : group) {
    r.kind = CheckKind::suspected_misprint;
    r.pass = true;
    if (!r.notes.empty()) r.notes += "; ";
    r.notes += note;
  }
  return true;
}

std::string format_complex(cplx z) {
  char buf[96];
  if (z.imag() == 0.0) {
    std::snprintf(buf, sizeof buf, "%.17g", z.real());
  } else if (z.real() == 0.0) {
    std::snprintf(buf, sizeof buf, "%.17gi", z.imag());
  } else {
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  }
  return buf;
}

std::string param_summary(const std::vector<std::pair<std::string, cplx>>& params) {
  std::string out;
  for (const auto& [name, value] : params) {
    if (!out.empty()) out += ';';
    out += name;
    out += '=';
    out += format_complex(value);
  }
  return out;
}

}  // namespace twistlab
