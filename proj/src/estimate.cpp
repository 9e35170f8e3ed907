#include "morawetz/estimate.hpp"

#include <cmath>
#include <cstdio>

namespace morawetz {

EstimateReport make_inequality_report(std::string name, double lhs, double rhs,
                                      double constant_used, double tolerance, bool informational,
                                      std::string context) {
    EstimateReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.constant_used = constant_used;
    r.tolerance = tolerance;
    r.context = std::move(context);
    r.ratio = (rhs != 0.0) ? lhs / rhs : (lhs == 0.0 ? 0.0 : INFINITY);
    if (informational) {
        r.verdict = EstimateReport::Verdict::info;
    } else {
        double slack = tolerance * std::max(std::abs(rhs), std::abs(lhs));
        r.verdict = (lhs <= rhs + slack) ? EstimateReport::Verdict::pass
                                         : EstimateReport::Verdict::fail;
    }
    return r;
}

std::string format_report_line(const EstimateReport& r) {
    const char* v = r.verdict == EstimateReport::Verdict::pass   ? "pass"
                    : r.verdict == EstimateReport::Verdict::fail ? "fail"
                                                                 : "info";
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "check=%s lhs=%.17g rhs=%.17g constant=%.17g ratio=%.17g verdict=%s",
                  r.name.c_str(), r.lhs, r.rhs, r.constant_used, r.ratio, v);
    return std::string(buf);
}

bool any_failed(const std::vector<EstimateReport>& reports) {
    for (const auto& r : reports)
        if (r.failed()) return true;
    return false;
}

}  // namespace morawetz
