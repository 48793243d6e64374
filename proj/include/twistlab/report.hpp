#pragma once

#include <string>
#include <utility>
#include <vector>

#include "twistlab/tensor.hpp"

namespace twistlab {

enum class CheckKind {
  check,               // pass = residual <= tolerance
  expected_failure,    // pass = residual > tolerance (the floor)
  suspected_misprint,  // a displayed relation failing at every sample; flagged
  observation,         // measured and reported, never gating
};

const char* to_string(CheckKind kind);

struct VerificationReport {
  std::string check_id;
  std::vector<std::pair<std::string, cplx>> params;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  CheckKind kind = CheckKind::check;
  std::string notes;

  /// True when this report should make a run exit nonzero.
  bool gating_failure() const;
};

/// Report whose pass flag follows the kind's rule.
VerificationReport make_report(std::string check_id,
                               std::vector<std::pair<std::string, cplx>> params, double residual,
                               double tolerance, CheckKind kind = CheckKind::check,
                               std::string notes = {});

/// Re-labels a group of reports for one displayed relation: when every sample
/// fails, they become suspected misprints (pass = true, since the flag is the
/// outcome) and `note` is appended. Returns whether the group was flagged.
bool flag_if_misprint(std::vector<VerificationReport>& group, const std::string& note);

/// "u=1.5+0.2i;v=-0.3i" style summary.
std::string param_summary(const std::vector<std::pair<std::string, cplx>>& params);

std::string format_complex(cplx z);

}  // namespace twistlab
