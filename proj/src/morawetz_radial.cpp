#include "morawetz/morawetz_radial.hpp"

#include "morawetz/local_laws.hpp"

#include <cmath>
#include <stdexcept>

namespace morawetz {

double morawetz_action(const ComplexField& field, const VectorFieldSpec& spec) {
    const SpectralGrid& g = field.grid;
    if (spec.kind != WeightKind::radial || spec.ambient_dim != g.dim)
        throw std::invalid_argument("morawetz_action: radial spec matching the grid required");
    FieldDensities d = densities(field);
    const double eps2 = spec.epsilon * spec.epsilon;
    double acc = 0.0;
    int idx[3];
    for (std::size_t i = 0; i < g.size(); ++i) {
        decode_index(g, i, idx);
        double x[3], r2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            x[a] = g.coord(idx[a]) - spec.center[a];
            r2 += x[a] * x[a];
        }
        double R = std::sqrt(r2 + eps2);
        if (R == 0.0) continue;
        double dot = 0.0;
        for (int a = 0; a < g.dim; ++a) dot += x[a] * d.momentum[a][i];
        acc += dot / R;
    }
    return -acc * g.cell_volume();
}

VirialTerms virial_rhs_terms(const ComplexField& field, const VectorFieldSpec& spec, double p,
                             double lambda) {
    const SpectralGrid& g = field.grid;
    if (spec.kind != WeightKind::radial || spec.ambient_dim != g.dim)
        throw std::invalid_argument("virial_rhs_terms: radial spec matching the grid required");
    if (!(spec.epsilon > 0)) throw std::invalid_argument("virial_rhs_terms: epsilon must be > 0");
    const double eps = spec.epsilon, eps2 = eps * eps;
    const int n = g.dim;
    FieldDensities d = densities(field);
    RealField pressure = nonlinear_pressure(RealField{g, d.rho}, p);

    VirialTerms out;
    int idx[3];
    for (std::size_t i = 0; i < g.size(); ++i) {
        decode_index(g, i, idx);
        double x[3], r2 = 0.0;
        for (int a = 0; a < n; ++a) {
            x[a] = g.coord(idx[a]) - spec.center[a];
            r2 += x[a] * x[a];
        }
        const double R = std::sqrt(r2 + eps2);
        const double R3 = R * R * R;
        const double div_x = eps2 / R3 + (n - 1) / R;

        // -Lap(div X) for a_eps = sqrt(r^2 + eps^2); see the generic
        // quadratic-form formula in vector_field.cpp (Q = I, kappa = 1).
        const double R5 = R3 * R * R, R7 = R5 * R * R;
        double fp = -0.5 * n / R3 - 1.0 / R3 + 1.5 * r2 / R5;
        double fpp = 0.75 * n / R5 + 3.0 / R5 - 3.75 * r2 / R7;
        const double neg_lap_div = -(2.0 * n * fp + 4.0 * r2 * fpp);

        out.bilaplacian_term += neg_lap_div * d.rho[i];
        out.nonlinear_term += div_x * lambda * pressure.values[i];

        // sigma contraction, tensor route through the generic evaluator.
        std::vector<double> pt(n);
        for (int a = 0; a < n; ++a) pt[a] = g.coord(idx[a]);
        Eigen::MatrixXd J = spec.jacobian(pt);
        double contr_tensor = 0.0;
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) contr_tensor += J(j, k) * d.sigma[j * n + k][i];
        out.sigma_term += contr_tensor;

        // Closed form (the printed identity): (2/R)(|grad u|^2 - |xhat.grad u|^2)
        // with the regularized R in place of |x|.
        double grad2 = 0.0;
        cplx radial_grad{0.0, 0.0};
        for (int a = 0; a < n; ++a) {
            grad2 += std::norm(d.gradient[a][i]);
            radial_grad += x[a] * d.gradient[a][i];
        }
        double closed = (2.0 / R) * (grad2 - std::norm(radial_grad) / (R * R));
        out.sigma_term_closed_form += closed;
    }
    const double vol = g.cell_volume();
    out.bilaplacian_term *= vol;
    out.nonlinear_term *= vol;
    out.sigma_term *= vol;
    out.sigma_term_closed_form *= vol;
    out.sigma_discrepancy = std::abs(out.sigma_term - out.sigma_term_closed_form);
    return out;
}

double weighted_lp_integral(const ComplexField& field, const Point& center, double exponent,
                            double epsilon) {
    const SpectralGrid& g = field.grid;
    const double eps2 = epsilon * epsilon;
    double acc = 0.0;
    int idx[3];
    for (std::size_t i = 0; i < g.size(); ++i) {
        decode_index(g, i, idx);
        double r2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            double x = g.coord(idx[a]) - center[a];
            r2 += x * x;
        }
        double w = 1.0 / std::sqrt(r2 + eps2);
        acc += std::pow(std::norm(field.values[i]), 0.5 * exponent) * w;
    }
    return acc * g.cell_volume();
}

double smoothed_center_density(const ComplexField& field, const Point& center, double epsilon) {
    const SpectralGrid& g = field.grid;
    if (!(epsilon > 0))
        throw std::invalid_argument("smoothed_center_density: epsilon must be > 0");
    const double eps2 = epsilon * epsilon;
    double acc = 0.0, wsum = 0.0;
    int idx[3];
    for (std::size_t i = 0; i < g.size(); ++i) {
        decode_index(g, i, idx);
        double r2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            double x = g.coord(idx[a]) - center[a];
            r2 += x * x;
        }
        double w = std::exp(-0.5 * r2 / eps2);
        acc += std::norm(field.values[i]) * w;
        wsum += w;
    }
    return wsum > 0 ? acc / wsum : 0.0;
}

double weighted_spacetime_norm(const std::vector<ComplexField>& snapshots,
                               const std::vector<double>& times, const Point& center,
                               double exponent, double epsilon) {
    if (snapshots.size() != times.size())
        throw std::invalid_argument("weighted_spacetime_norm: snapshot/time mismatch");
    if (snapshots.empty()) return 0.0;
    std::vector<double> vals(snapshots.size());
    for (std::size_t i = 0; i < snapshots.size(); ++i)
        vals[i] = weighted_lp_integral(snapshots[i], center, exponent, epsilon);
    if (snapshots.size() == 1) return vals[0];
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < vals.size(); ++i)
        acc += 0.5 * (vals[i] + vals[i + 1]) * (times[i + 1] - times[i]);
    return acc;
}

EstimateReport lin_strauss_check(const DiagnosticTrace& trace, double p) {
    (void)p;
    const auto& t = trace.times;
    const auto& cd = trace.channel("center_density");
    const auto& wp = trace.channel("weighted_pp1");
    const auto& hh = trace.channel("hhalf_sq");
    double lhs = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
        lhs += 0.5 * (cd[i] + wp[i] + cd[i + 1] + wp[i + 1]) * (t[i + 1] - t[i]);
    double rhs = 0.0;
    for (double v : hh) rhs = std::max(rhs, v);
    return make_inequality_report("lin-strauss", lhs, rhs, 1.0, 0.0, /*informational=*/true);
}

}  // namespace morawetz
