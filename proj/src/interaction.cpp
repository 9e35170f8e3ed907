#include "morawetz/interaction.hpp"

#include "morawetz/local_laws.hpp"
#include "morawetz/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace morawetz {

namespace {

// Signed periodic difference coordinate for an index offset t in [0, N).
inline double wrapped_offset(int t, int n, double h) {
    return (t < n / 2 ? t : t - n) * h;
}

// Numerator component of the difference kernel. The Nyquist offset t = n/2
// has an ambiguous sign (+L/2 or -L/2); averaging the two choices keeps
// the kernel exactly odd, which the convolution route relies on, and
// zeroes this component (the magnitude entering the denominator is the
// same either way).
inline double odd_offset(int t, int n, double h) {
    if (2 * t == n) return 0.0;
    return wrapped_offset(t, n, h);
}

void require_dim(const ComplexField& f, int dim, const char* who) {
    if (f.grid.dim != dim) throw std::invalid_argument(std::string(who) + ": wrong grid dimension");
}

}  // namespace

Curve2D make_line_curve(const SpectralGrid& grid, const Line2D& line, int n_samples) {
    if (grid.dim != 2) throw std::invalid_argument("make_line_curve: 2D grid required");
    if (n_samples < 2) throw std::invalid_argument("make_line_curve: need at least 2 samples");
    auto dir = line.direction();
    const double half = 0.5 * grid.length;
    double t_lo = -1e300, t_hi = 1e300;
    for (int a = 0; a < 2; ++a) {
        double w = (a == 0) ? dir[0] : dir[1];
        double p = (a == 0) ? line.point[0] : line.point[1];
        if (std::abs(w) < 1e-14) {
            if (std::abs(p) > half) throw std::invalid_argument("make_line_curve: line misses box");
            continue;
        }
        double ta = (-half - p) / w, tb = (half - p) / w;
        if (ta > tb) std::swap(ta, tb);
        t_lo = std::max(t_lo, ta);
        t_hi = std::min(t_hi, tb);
    }
    if (!(t_hi > t_lo)) throw std::invalid_argument("make_line_curve: line misses box");
    Curve2D c;
    const double dt = (t_hi - t_lo) / (n_samples - 1);
    for (int i = 0; i < n_samples; ++i) {
        double t = t_lo + i * dt;
        c.samples.push_back({line.point[0] + t * dir[0], line.point[1] + t * dir[1]});
        c.arclength_weights.push_back((i == 0 || i == n_samples - 1) ? 0.5 * dt : dt);
    }
    return c;
}

double interaction_action_3d(const ComplexField& field, double epsilon) {
    require_dim(field, 3, "interaction_action_3d");
    const SpectralGrid& g = field.grid;
    const std::size_t total = g.size();
    const double eps2 = epsilon * epsilon;
    FieldDensities d = densities(field);

    std::vector<cplx> rho_hat(total);
    for (std::size_t i = 0; i < total; ++i) rho_hat[i] = d.rho[i];
    transform_in_place(rho_hat, g, Direction::forward);

    double action = 0.0;
    int idx[3];
    for (int a = 0; a < 3; ++a) {
        std::vector<cplx> kern(total);
        for (std::size_t i = 0; i < total; ++i) {
            decode_index(g, i, idx);
            double w2 = 0.0;
            for (int b = 0; b < 3; ++b) {
                double w = wrapped_offset(idx[b], g.n, g.h);
                w2 += w * w;
            }
            double den = std::sqrt(w2 + eps2);
            kern[i] = (den > 0.0) ? odd_offset(idx[a], g.n, g.h) / den : 0.0;
        }
        transform_in_place(kern, g, Direction::forward);
        for (std::size_t i = 0; i < total; ++i) kern[i] *= rho_hat[i] * g.cell_volume();
        transform_in_place(kern, g, Direction::inverse);
        double s = 0.0;
        for (std::size_t i = 0; i < total; ++i) s += d.momentum[a][i] * kern[i].real();
        action += s;
    }
    return -4.0 * action * g.cell_volume();
}

double interaction_action_3d_direct(const ComplexField& field, double epsilon) {
    require_dim(field, 3, "interaction_action_3d_direct");
    const SpectralGrid& g = field.grid;
    const std::size_t total = g.size();
    if (g.n > 12)
        throw std::invalid_argument("interaction_action_3d_direct: grid too large for O(M^2) sum");
    const double eps2 = epsilon * epsilon;
    FieldDensities d = densities(field);
    const int n = g.n;
    double acc = parallel_sum(total, [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        int iy[3], iz[3];
        for (std::size_t i = lo; i < hi; ++i) {
            decode_index(g, i, iy);
            for (std::size_t j = 0; j < total; ++j) {
                decode_index(g, j, iz);
                double w[3], w2 = 0.0;
                for (int b = 0; b < 3; ++b) {
                    int t = iy[b] - iz[b];
                    if (t < 0) t += n;
                    double mag = wrapped_offset(t, n, g.h);
                    w[b] = odd_offset(t, n, g.h);
                    w2 += mag * mag;
                }
                double den = std::sqrt(w2 + eps2);
                if (den == 0.0) continue;
                double dot = 0.0;
                for (int b = 0; b < 3; ++b)
                    dot += (2.0 * d.rho[j] * d.momentum[b][i] - 2.0 * d.rho[i] * d.momentum[b][j]) *
                           w[b] / den;
                s += dot;
            }
        }
        return s;
    });
    double vol = g.cell_volume();
    return -acc * vol * vol;
}

namespace {

// Shared setup for the 2D line-diagonal pairwise sum: rotated coordinates
// and line-frame momenta.
struct LineFrameData {
    std::vector<double> a1, a2;      // line-frame coordinates per grid point
    std::vector<double> q1, q2;      // line-frame momentum components
    std::vector<double> rho;
};

LineFrameData line_frame_data(const ComplexField& field, const Line2D& line) {
    const SpectralGrid& g = field.grid;
    FieldDensities d = densities(field);
    const double c = std::cos(line.angle), s = std::sin(line.angle);
    LineFrameData out;
    const std::size_t total = g.size();
    out.a1.resize(total);
    out.a2.resize(total);
    out.q1.resize(total);
    out.q2.resize(total);
    out.rho = std::move(d.rho);
    int idx[3];
    for (std::size_t i = 0; i < total; ++i) {
        decode_index(g, i, idx);
        double x = g.coord(idx[0]) - line.point[0];
        double y = g.coord(idx[1]) - line.point[1];
        // rotation by -angle maps the line direction to the x-axis
        out.a1[i] = c * x + s * y;
        out.a2[i] = -s * x + c * y;
        double p1 = d.momentum[0][i], p2 = d.momentum[1][i];
        out.q1[i] = c * p1 + s * p2;
        out.q2[i] = -s * p1 + c * p2;
    }
    return out;
}

}  // namespace

double interaction_action_2d(const ComplexField& field, const Line2D& line, double epsilon,
                             int max_n) {
    require_dim(field, 2, "interaction_action_2d");
    const SpectralGrid& g = field.grid;
    if (g.n > max_n)
        throw std::invalid_argument("interaction_action_2d: N = " + std::to_string(g.n) +
                                    " exceeds the O(M^2) budget (max N = " + std::to_string(max_n) +
                                    ")");
    const double eps2 = epsilon * epsilon;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    LineFrameData f = line_frame_data(field, line);
    const std::size_t total = g.size();

    double acc = parallel_sum(total, [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            const double a1i = f.a1[i], a2i = f.a2[i];
            const double rhoi = f.rho[i], q1i = f.q1[i], q2i = f.q2[i];
            for (std::size_t j = 0; j < total; ++j) {
                double sv = (a1i - f.a1[j]) * inv_sqrt2;
                double d2 = sv * sv + a2i * a2i + f.a2[j] * f.a2[j] + eps2;
                if (d2 == 0.0) continue;
                double inv_d = 1.0 / std::sqrt(d2);
                // X blocks in the line frame: (s/sqrt2, a2_i)/d and (-s/sqrt2, a2_j)/d
                double term = 2.0 * f.rho[j] * (q1i * sv * inv_sqrt2 + q2i * a2i) +
                              2.0 * rhoi * (-f.q1[j] * sv * inv_sqrt2 + f.q2[j] * f.a2[j]);
                s += term * inv_d;
            }
        }
        return s;
    });
    double vol = g.cell_volume();
    return -acc * vol * vol;
}

double interaction_action_2d_direct(const ComplexField& field, const Line2D& line, double epsilon,
                                    int max_n) {
    require_dim(field, 2, "interaction_action_2d_direct");
    const SpectralGrid& g = field.grid;
    if (g.n > max_n)
        throw std::invalid_argument("interaction_action_2d_direct: grid too large for the oracle");
    VectorFieldSpec spec = line_diagonal_weight_2d(line, epsilon);
    FieldDensities d = densities(field);
    const std::size_t total = g.size();
    double acc = 0.0;
    int ii[3], jj[3];
    std::vector<double> pt(4);
    for (std::size_t i = 0; i < total; ++i) {
        decode_index(g, i, ii);
        for (std::size_t j = 0; j < total; ++j) {
            decode_index(g, j, jj);
            pt[0] = g.coord(ii[0]);
            pt[1] = g.coord(ii[1]);
            pt[2] = g.coord(jj[0]);
            pt[3] = g.coord(jj[1]);
            if (spec.epsilon == 0.0 && spec.q_form(pt) == 0.0) continue;
            Eigen::VectorXd X = spec.gradient(pt);
            double tensor_p[4] = {2.0 * d.rho[j] * d.momentum[0][i],
                                  2.0 * d.rho[j] * d.momentum[1][i],
                                  2.0 * d.rho[i] * d.momentum[0][j],
                                  2.0 * d.rho[i] * d.momentum[1][j]};
            for (int k = 0; k < 4; ++k) acc += tensor_p[k] * X[k];
        }
    }
    double vol = g.cell_volume();
    return -acc * vol * vol;
}

double interaction_action_1d(const ComplexField& field, double epsilon, int max_n) {
    require_dim(field, 1, "interaction_action_1d");
    const SpectralGrid& g = field.grid;
    const int n = g.n;
    if (n > max_n)
        throw std::invalid_argument("interaction_action_1d: N = " + std::to_string(n) +
                                    " exceeds the O(N^4) budget (max N = " + std::to_string(max_n) +
                                    ")");
    const double eps2 = epsilon * epsilon;
    FieldDensities d = densities(field);
    std::vector<double> x(n), two_rho(n), p(n);
    for (int i = 0; i < n; ++i) {
        x[i] = g.coord(i);
        two_rho[i] = 2.0 * d.rho[i];
        p[i] = d.momentum[0][i];
    }
    double acc = parallel_sum(static_cast<std::size_t>(n), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        double xs[4] = {x[i], x[j], x[k], x[l]};
                        double mean = 0.25 * (xs[0] + xs[1] + xs[2] + xs[3]);
                        double q = 0.0;
                        for (int m = 0; m < 4; ++m) {
                            double dxm = xs[m] - mean;
                            q += dxm * dxm;
                        }
                        double R = std::sqrt(q + eps2);
                        if (R == 0.0) continue;
                        double r[4] = {two_rho[i], two_rho[j], two_rho[k], two_rho[l]};
                        double ps[4] = {p[i], p[j], p[k], p[l]};
                        double term = 0.0;
                        for (int m = 0; m < 4; ++m) {
                            double prod = 1.0;
                            for (int o = 0; o < 4; ++o)
                                if (o != m) prod *= r[o];
                            term += prod * ps[m] * (xs[m] - mean) / R;
                        }
                        s += term;
                    }
        return s;
    });
    double h4 = std::pow(g.h, 4);
    return -acc * h4;
}

double interaction_action_1d_direct(const ComplexField& field, double epsilon, int max_n) {
    require_dim(field, 1, "interaction_action_1d_direct");
    const SpectralGrid& g = field.grid;
    const int n = g.n;
    if (n > max_n)
        throw std::invalid_argument("interaction_action_1d_direct: grid too large for the oracle");
    VectorFieldSpec spec = diag_1d_weight(epsilon);
    FieldDensities d = densities(field);
    double acc = 0.0;
    std::vector<double> pt(4);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    pt[0] = g.coord(i);
                    pt[1] = g.coord(j);
                    pt[2] = g.coord(k);
                    pt[3] = g.coord(l);
                    if (spec.epsilon == 0.0 && spec.q_form(pt) == 0.0) continue;
                    Eigen::VectorXd X = spec.gradient(pt);
                    int ids[4] = {i, j, k, l};
                    for (int m = 0; m < 4; ++m) {
                        double prod = 1.0;
                        for (int o = 0; o < 4; ++o)
                            if (o != m) prod *= 2.0 * d.rho[ids[o]];
                        acc += prod * d.momentum[0][ids[m]] * X[m];
                    }
                }
    return -acc * std::pow(g.h, 4);
}

double line_restricted_l4(const ComplexField& field, const Curve2D& curve) {
    if (curve.samples.size() != curve.arclength_weights.size())
        throw std::invalid_argument("line_restricted_l4: sample/weight mismatch");
    std::vector<Point> pts;
    pts.reserve(curve.samples.size());
    for (const auto& s : curve.samples) pts.push_back({s[0], s[1], 0.0});
    std::vector<cplx> vals = interpolate(field, pts);
    double acc = 0.0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        double m2 = std::norm(vals[i]);
        acc += m2 * m2 * curve.arclength_weights[i];
    }
    return acc;
}

double angular_average_weighted_l4(const ComplexField& field, const Point& center, int n_theta,
                                   double epsilon, int samples_per_line) {
    (void)epsilon;
    require_dim(field, 2, "angular_average_weighted_l4");
    if (n_theta < 4) throw std::invalid_argument("angular_average_weighted_l4: n_theta >= 4");
    const SpectralGrid& g = field.grid;
    if (samples_per_line <= 0) samples_per_line = 4 * g.n;
    double acc = 0.0;
    for (int i = 0; i < n_theta; ++i) {
        Line2D line{{center[0], center[1]}, M_PI * i / n_theta};
        Curve2D c = make_line_curve(g, line, samples_per_line);
        acc += line_restricted_l4(field, c);
    }
    // Full lines over [0, pi) cover all directions; the pi/n_theta weight
    // makes the limit int |u|^4 / |x - center| dx.
    return acc * M_PI / n_theta;
}

ComplexField spectral_upsample(const ComplexField& field, int factor) {
    if (factor < 1) throw std::invalid_argument("spectral_upsample: factor >= 1");
    if (factor == 1) return field;
    const SpectralGrid& g = field.grid;
    SpectralGrid fine = make_grid(g.dim, g.n * factor, g.length);
    ComplexField spec = transform(field, Direction::forward);
    ComplexField out = make_field(fine);
    const double scale = std::pow(static_cast<double>(factor), g.dim);
    int idx[3];
    for (std::size_t i = 0; i < g.size(); ++i) {
        decode_index(g, i, idx);
        std::size_t lin = 0;
        for (int d = 0; d < g.dim; ++d) {
            int m = (idx[d] < g.n / 2) ? idx[d] : idx[d] - g.n;
            int pos = (m >= 0) ? m : m + fine.n;
            lin = lin * static_cast<std::size_t>(fine.n) + static_cast<std::size_t>(pos);
        }
        out.values[lin] = spec.values[i] * scale;
    }
    transform_in_place(out.values, fine, Direction::inverse);
    return out;
}

double weighted_l4_direct_quadrature(const ComplexField& field, const Point& center,
                                     int upsample_factor) {
    require_dim(field, 2, "weighted_l4_direct_quadrature");
    ComplexField fine = spectral_upsample(field, upsample_factor);
    const SpectralGrid& g = fine.grid;
    // |u(center)|^4 for the subtraction term.
    Point c = center;
    std::vector<Point> cp{c};
    double fc = std::norm(interpolate(field, cp)[0]);
    fc *= fc;
    const double s = 1.0;  // subtraction Gaussian width
    double acc = 0.0;
    int idx[3];
    for (std::size_t i = 0; i < g.size(); ++i) {
        decode_index(g, i, idx);
        double dx = g.coord(idx[0]) - center[0];
        double dy = g.coord(idx[1]) - center[1];
        double r2 = dx * dx + dy * dy;
        if (r2 == 0.0) continue;
        double m2 = std::norm(fine.values[i]);
        double f = m2 * m2 - fc * std::exp(-r2 / (s * s));
        acc += f / std::sqrt(r2);
    }
    // int exp(-r^2/s^2)/r dx = pi^{3/2} s over the plane.
    return acc * g.cell_volume() + fc * std::pow(M_PI, 1.5) * s;
}

std::vector<EstimateReport> monotonicity_and_ftc_check(const DiagnosticTrace& trace,
                                                       WeightKind kind, double tol_rel) {
    std::string mname, iname, pointwise_name;
    double constant = 0.0;
    bool explicit_constant = true;
    switch (kind) {
        case WeightKind::pair3d:
            mname = "M_pair";
            iname = "quad_l4";
            pointwise_name = "pointwise-16pi";
            constant = 16.0 * M_PI;
            break;
        case WeightKind::line_diag2d:
            mname = "M_line";
            iname = "line_l4";
            pointwise_name = "pointwise-2pi";
            constant = 2.0 * M_PI;
            break;
        case WeightKind::diag1d:
            mname = "M_diag";
            iname = "oct_l8";
            pointwise_name = "pointwise-8pi";
            constant = 8.0 * M_PI;
            // No sharp published constant for this variant; report, don't gate.
            explicit_constant = false;
            break;
        default:
            throw std::invalid_argument("monotonicity_and_ftc_check: unsupported weight kind");
    }
    const auto& t = trace.times;
    const auto& M = trace.channel(mname);
    const auto& I = trace.channel(iname);
    if (t.size() < 3) throw std::invalid_argument("monotonicity_and_ftc_check: trace too short");

    std::vector<EstimateReport> reports;
    double m_max = 0.0, ci_max = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        m_max = std::max(m_max, std::abs(M[i]));
        ci_max = std::max(ci_max, constant * I[i]);
    }

    // (i) monotonicity of M
    double worst_drop = 0.0;  // most negative forward slope, as a positive defect
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        double slope = (M[i + 1] - M[i]) / (t[i + 1] - t[i]);
        worst_drop = std::max(worst_drop, -slope);
    }
    double mono_tol = 1e-6 * std::max(1.0, m_max);
    reports.push_back(make_inequality_report("monotonicity", worst_drop, mono_tol, 1.0, 0.0));

    // (ii) pointwise dM/dt >= constant * I (centered differences)
    double worst_defect = -1e300;
    for (std::size_t i = 1; i + 1 < t.size(); ++i) {
        double dmdt = (M[i + 1] - M[i - 1]) / (t[i + 1] - t[i - 1]);
        worst_defect = std::max(worst_defect, constant * I[i] - dmdt);
    }
    reports.push_back(make_inequality_report(pointwise_name, worst_defect, tol_rel * ci_max,
                                             constant, 0.0, !explicit_constant));

    // (iii) FTC: constant * int I dt <= M(T) - M(0) (+ relative slack)
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
        integral += 0.5 * (I[i] + I[i + 1]) * (t[i + 1] - t[i]);
    double dM = M.back() - M.front();
    reports.push_back(make_inequality_report("ftc", constant * integral, dM + tol_rel * m_max,
                                             constant, 0.0, !explicit_constant));
    {
        EstimateReport gap;
        gap.name = "ftc-gap";
        gap.lhs = dM - constant * integral;
        gap.rhs = dM;
        gap.constant_used = constant;
        gap.ratio = (dM != 0.0) ? gap.lhs / dM : 0.0;
        gap.verdict = EstimateReport::Verdict::info;
        reports.push_back(gap);
    }

    // Informational bound on sup |M| by the conserved-norm product.
    if (kind == WeightKind::diag1d) {
        if (trace.channels.count("mass") && trace.channels.count("hone")) {
            const auto& mass = trace.channel("mass");
            const auto& hone = trace.channel("hone");
            double rhs = 0.0;
            for (std::size_t i = 0; i < t.size(); ++i)
                rhs = std::max(rhs, std::pow(std::sqrt(mass[i]), 7.0) * hone[i]);
            reports.push_back(make_inequality_report("l8-ratio", integral, rhs, 1.0, 0.0, true));
        }
    } else if (trace.channels.count("mass") && trace.channels.count("hhalf_sq")) {
        const auto& mass = trace.channel("mass");
        const auto& hh = trace.channel("hhalf_sq");
        double rhs = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) rhs = std::max(rhs, mass[i] * hh[i]);
        reports.push_back(make_inequality_report("action-bound", m_max, rhs, 1.0, 0.0, true));
    }
    return reports;
}

namespace {

// Per-factor spectral ingredients for the 4D tensor-law residual.
struct FactorDerivs {
    std::vector<cplx> u, ux, uy, uxx, uxy, uyy, lap, lap_x, lap_y;
};

FactorDerivs factor_derivs(const ComplexField& f) {
    FactorDerivs d;
    d.u = f.values;
    d.ux = spectral_derivative(f, 0, 1).values;
    d.uy = spectral_derivative(f, 1, 1).values;
    ComplexField fx{f.grid, d.ux};
    ComplexField fy{f.grid, d.uy};
    d.uxx = spectral_derivative(f, 0, 2).values;
    d.uyy = spectral_derivative(f, 1, 2).values;
    d.uxy = spectral_derivative(fx, 1, 1).values;
    d.lap.resize(d.u.size());
    for (std::size_t i = 0; i < d.u.size(); ++i) d.lap[i] = d.uxx[i] + d.uyy[i];
    ComplexField lapf{f.grid, d.lap};
    d.lap_x = spectral_derivative(lapf, 0, 1).values;
    d.lap_y = spectral_derivative(lapf, 1, 1).values;
    return d;
}

}  // namespace

double tensor_residual_check_4d(const std::array<ComplexField, 3>& u1,
                                const std::array<ComplexField, 3>& u2, const Line2D& line,
                                double epsilon, double dt, int max_n) {
    const SpectralGrid& g = u1[1].grid;
    if (g.dim != 2 || u2[1].grid.dim != 2)
        throw std::invalid_argument("tensor_residual_check_4d: 2D factors required");
    if (g.n > max_n)
        throw std::invalid_argument("tensor_residual_check_4d: N = " + std::to_string(g.n) +
                                    " exceeds the N^4 budget (max N = " + std::to_string(max_n) +
                                    ")");
    VectorFieldSpec spec = line_diagonal_weight_2d(line, epsilon);

    FactorDerivs f1 = factor_derivs(u1[1]);
    FactorDerivs f2 = factor_derivs(u2[1]);
    // Momentum ingredients at the outer times for the centered difference.
    auto light = [](const ComplexField& f) {
        FactorDerivs d;
        d.u = f.values;
        d.ux = spectral_derivative(f, 0, 1).values;
        d.uy = spectral_derivative(f, 1, 1).values;
        return d;
    };
    FactorDerivs b1 = light(u1[0]), a1 = light(u1[2]);
    FactorDerivs b2 = light(u2[0]), a2 = light(u2[2]);

    const std::size_t total = g.size();
    double acc = parallel_sum(total, [&](std::size_t lo, std::size_t hi) {
        std::vector<double> pt(4);
        double s = 0.0;
        int ia[3], ib[3];
        for (std::size_t i = lo; i < hi; ++i) {
            decode_index(g, i, ia);
            for (std::size_t j = 0; j < total; ++j) {
                decode_index(g, j, ib);
                pt[0] = g.coord(ia[0]);
                pt[1] = g.coord(ia[1]);
                pt[2] = g.coord(ib[0]);
                pt[3] = g.coord(ib[1]);
                if (spec.epsilon == 0.0 && spec.q_form(pt) == 0.0) continue;
                Eigen::VectorXd X = spec.gradient(pt);

                // X . p at the outer times.
                auto xdotp = [&](const FactorDerivs& d1, const FactorDerivs& d2) {
                    double r1 = 0.5 * std::norm(d1.u[i]);
                    double r2v = 0.5 * std::norm(d2.u[j]);
                    double p[4] = {
                        2.0 * r2v * std::imag(std::conj(d1.u[i]) * d1.ux[i]),
                        2.0 * r2v * std::imag(std::conj(d1.u[i]) * d1.uy[i]),
                        2.0 * r1 * std::imag(std::conj(d2.u[j]) * d2.ux[j]),
                        2.0 * r1 * std::imag(std::conj(d2.u[j]) * d2.uy[j]),
                    };
                    return X[0] * p[0] + X[1] * p[1] + X[2] * p[2] + X[3] * p[3];
                };
                double lhs = (xdotp(a1, a2) - xdotp(b1, b2)) / (2.0 * dt);

                // RHS = X . (grad G + div sigma) with G = Phi - Lap rho.
                double rho1 = 0.5 * std::norm(f1.u[i]);
                double rho2 = 0.5 * std::norm(f2.u[j]);
                // factor-level gradients of rho and of Lap rho
                cplx cu1 = std::conj(f1.u[i]), cu2 = std::conj(f2.u[j]);
                double dr1[2] = {std::real(cu1 * f1.ux[i]), std::real(cu1 * f1.uy[i])};
                double dr2[2] = {std::real(cu2 * f2.ux[j]), std::real(cu2 * f2.uy[j])};
                double lap_r1 = std::real(cu1 * f1.lap[i]) + std::norm(f1.ux[i]) +
                                std::norm(f1.uy[i]);
                double lap_r2 = std::real(cu2 * f2.lap[j]) + std::norm(f2.ux[j]) +
                                std::norm(f2.uy[j]);
                double dlap_r1[2] = {
                    std::real(std::conj(f1.ux[i]) * f1.lap[i] + cu1 * f1.lap_x[i]) +
                        2.0 * std::real(std::conj(f1.ux[i]) * f1.uxx[i] +
                                        std::conj(f1.uy[i]) * f1.uxy[i]),
                    std::real(std::conj(f1.uy[i]) * f1.lap[i] + cu1 * f1.lap_y[i]) +
                        2.0 * std::real(std::conj(f1.ux[i]) * f1.uxy[i] +
                                        std::conj(f1.uy[i]) * f1.uyy[i]),
                };
                double dlap_r2[2] = {
                    std::real(std::conj(f2.ux[j]) * f2.lap[j] + cu2 * f2.lap_x[j]) +
                        2.0 * std::real(std::conj(f2.ux[j]) * f2.uxx[j] +
                                        std::conj(f2.uy[j]) * f2.uxy[j]),
                    std::real(std::conj(f2.uy[j]) * f2.lap[j] + cu2 * f2.lap_y[j]) +
                        2.0 * std::real(std::conj(f2.ux[j]) * f2.uxy[j] +
                                        std::conj(f2.uy[j]) * f2.uyy[j]),
                };
                // grad G over the four product coordinates. The nonlinear
                // pressure is block-dependent: the potential term of the
                // product equation contributes |U|^2 grad V with
                // V = |u_1|^2 + |u_2|^2, which is the gradient of
                // 4 rho_1^2 rho_2 in the x_1 block and of 4 rho_1 rho_2^2
                // in the x_2 block (their sum is the symmetric Phi).
                double gradG[4];
                for (int a = 0; a < 2; ++a) {
                    double dPhi = 8.0 * rho1 * rho2 * dr1[a];
                    double dLap = 2.0 * dlap_r1[a] * rho2 + 2.0 * dr1[a] * lap_r2;
                    gradG[a] = dPhi - dLap;
                }
                for (int a = 0; a < 2; ++a) {
                    double dPhi = 8.0 * rho1 * rho2 * dr2[a];
                    double dLap = 2.0 * lap_r1 * dr2[a] + 2.0 * rho1 * dlap_r2[a];
                    gradG[2 + a] = dPhi - dLap;
                }
                // div sigma components D_k = 2 Re(Lap U d_k conj(U) + sum_j d_j U d_j d_k conj(U))
                cplx lapU = f1.lap[i] * f2.u[j] + f1.u[i] * f2.lap[j];
                cplx g1[2] = {f1.ux[i], f1.uy[i]};
                cplx g2[2] = {f2.ux[j], f2.uy[j]};
                cplx h1[2][2] = {{f1.uxx[i], f1.uxy[i]}, {f1.uxy[i], f1.uyy[i]}};
                cplx h2[2][2] = {{f2.uxx[j], f2.uxy[j]}, {f2.uxy[j], f2.uyy[j]}};
                double D[4];
                for (int k = 0; k < 2; ++k) {
                    cplx dkUbar = std::conj(g1[k]) * cu2;
                    cplx term = lapU * dkUbar;
                    cplx s1{0.0, 0.0};
                    for (int a = 0; a < 2; ++a) s1 += g1[a] * std::conj(h1[a][k]);
                    term += std::norm(f2.u[j]) * s1;
                    cplx s2{0.0, 0.0};
                    for (int a = 0; a < 2; ++a) s2 += g2[a] * std::conj(g2[a]);
                    term += f1.u[i] * std::conj(g1[k]) * s2;
                    D[k] = 2.0 * std::real(term);
                }
                for (int k = 0; k < 2; ++k) {
                    cplx dkUbar = cu1 * std::conj(g2[k]);
                    cplx term = lapU * dkUbar;
                    cplx s2{0.0, 0.0};
                    for (int a = 0; a < 2; ++a) s2 += g2[a] * std::conj(h2[a][k]);
                    term += std::norm(f1.u[i]) * s2;
                    cplx s1{0.0, 0.0};
                    for (int a = 0; a < 2; ++a) s1 += g1[a] * std::conj(g1[a]);
                    term += f2.u[j] * std::conj(g2[k]) * s1;
                    D[2 + k] = 2.0 * std::real(term);
                }
                double rhs = 0.0;
                for (int k = 0; k < 4; ++k) rhs += X[k] * (gradG[k] + D[k]);
                double e = lhs - rhs;
                s += e * e;
            }
        }
        return s;
    });
    return std::sqrt(acc * std::pow(g.h, 4));
}

}  // namespace morawetz
