#pragma once

#include <string>
#include <vector>

namespace morawetz {

// One measured inequality. Explicit-constant checks (16*pi, 2*pi, delta
// limits) carry verdict pass/fail; "<~"-type claims with unspecified
// constants are informational and only report the measured ratio.
struct EstimateReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double constant_used = 1.0;
    double ratio = 0.0;  // lhs / rhs when rhs != 0
    double tolerance = 0.0;
    enum class Verdict { pass, fail, info } verdict = Verdict::info;
    std::string context;

    bool failed() const { return verdict == Verdict::fail; }
};

// Verdict for lhs <= rhs * (1 + tol) with a small absolute floor for
// near-zero right sides.
EstimateReport make_inequality_report(std::string name, double lhs, double rhs,
                                      double constant_used, double tolerance,
                                      bool informational = false, std::string context = {});

std::string format_report_line(const EstimateReport& r);

bool any_failed(const std::vector<EstimateReport>& reports);

}  // namespace morawetz
