#include "morawetz/vector_field.hpp"

#include "morawetz/quadrature.hpp"

#include <limits>
#include <stdexcept>

namespace morawetz {

namespace {

Eigen::VectorXd to_vec(std::span<const double> x, int dim) {
    if (static_cast<int>(x.size()) != dim)
        throw std::invalid_argument("vector field: point dimension mismatch");
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = x[i];
    return v;
}

}  // namespace

double VectorFieldSpec::q_form(std::span<const double> x) const {
    Eigen::VectorXd y = to_vec(x, ambient_dim) - center;
    return y.dot(Q * y);
}

void VectorFieldSpec::check_regular(std::span<const double> x) const {
    if (epsilon == 0.0 && q_form(x) == 0.0)
        throw std::domain_error("vector field: evaluation on the singular set with epsilon = 0");
}

double VectorFieldSpec::weight(std::span<const double> x) const {
    return std::sqrt(q_form(x) + epsilon * epsilon);
}

Eigen::VectorXd VectorFieldSpec::gradient(std::span<const double> x) const {
    check_regular(x);
    Eigen::VectorXd y = to_vec(x, ambient_dim) - center;
    double R = std::sqrt(y.dot(Q * y) + epsilon * epsilon);
    return (Q * y) / R;
}

Eigen::MatrixXd VectorFieldSpec::jacobian(std::span<const double> x) const {
    check_regular(x);
    Eigen::VectorXd y = to_vec(x, ambient_dim) - center;
    Eigen::VectorXd Qy = Q * y;
    double R = std::sqrt(y.dot(Qy) + epsilon * epsilon);
    return Q / R - (Qy * Qy.transpose()) / (R * R * R);
}

double VectorFieldSpec::div(std::span<const double> x) const {
    check_regular(x);
    double q = q_form(x);
    double R = std::sqrt(q + epsilon * epsilon);
    return Q.trace() / R - kappa * q / (R * R * R);
}

double VectorFieldSpec::neg_lap_div(std::span<const double> x) const {
    check_regular(x);
    const double T = Q.trace();
    const double q = q_form(x);
    const double R = std::sqrt(q + epsilon * epsilon);
    const double R3 = R * R * R, R5 = R3 * R * R, R7 = R5 * R * R;
    // div X = f(q) with f = T/R - kappa q/R^3; Lap f = 2 T f' + 4 kappa q f''.
    double fp = -0.5 * T / R3 - kappa / R3 + 1.5 * kappa * q / R5;
    double fpp = 0.75 * T / R5 + 3.0 * kappa / R5 - 3.75 * kappa * q / R7;
    return -(2.0 * T * fp + 4.0 * kappa * q * fpp);
}

double VectorFieldSpec::x_bound_norm(std::span<const double> x) const {
    Eigen::VectorXd X = gradient(x);
    if (x_bound_block <= 0 || x_bound_block >= ambient_dim) return X.norm();
    double best = 0.0;
    for (int b = 0; b + x_bound_block <= ambient_dim; b += x_bound_block)
        best = std::max(best, X.segment(b, x_bound_block).norm());
    return best;
}

VectorFieldSpec radial_weight(int n, double epsilon) {
    if (n < 1) throw std::invalid_argument("radial_weight: n must be >= 1");
    if (epsilon < 0) throw std::invalid_argument("radial_weight: epsilon must be >= 0");
    VectorFieldSpec s;
    s.kind = WeightKind::radial;
    s.ambient_dim = n;
    s.epsilon = epsilon;
    s.Q = Eigen::MatrixXd::Identity(n, n);
    s.center = Eigen::VectorXd::Zero(n);
    s.kappa = 1.0;
    s.delta_constant = (n == 3) ? 8.0 * M_PI : 0.0;
    s.reduced_direction = Eigen::VectorXd::Unit(n, 0);
    return s;
}

VectorFieldSpec pair_weight_3d(double epsilon) {
    if (epsilon < 0) throw std::invalid_argument("pair_weight_3d: epsilon must be >= 0");
    VectorFieldSpec s;
    s.kind = WeightKind::pair3d;
    s.ambient_dim = 6;
    s.epsilon = epsilon;
    // a = |y - z|: q = x^T M x with M = [[I,-I],[-I,I]], M^2 = 2M.
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(6, 6);
    M.block(0, 0, 3, 3) = Eigen::MatrixXd::Identity(3, 3);
    M.block(3, 3, 3, 3) = Eigen::MatrixXd::Identity(3, 3);
    M.block(0, 3, 3, 3) = -Eigen::MatrixXd::Identity(3, 3);
    M.block(3, 0, 3, 3) = -Eigen::MatrixXd::Identity(3, 3);
    s.Q = M;
    s.center = Eigen::VectorXd::Zero(6);
    s.kappa = 2.0;
    s.delta_constant = 32.0 * M_PI;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(6);
    v[0] = 0.5;
    v[3] = -0.5;  // w = y - z = r * e1 at x = r*v
    s.reduced_direction = v;
    s.x_bound_block = 3;
    return s;
}

VectorFieldSpec line_diagonal_weight_2d(const Line2D& line, double epsilon) {
    if (epsilon < 0) throw std::invalid_argument("line_diagonal_weight_2d: epsilon must be >= 0");
    VectorFieldSpec s;
    s.kind = WeightKind::line_diag2d;
    s.ambient_dim = 4;
    s.epsilon = epsilon;
    // Distance from (x1, x2) in R^2 x R^2 to the lifted diagonal
    // {x1 = x2 = point on line}: in line-frame coordinates (y1..y4),
    // d^2 = (y1-y3)^2/2 + y2^2 + y4^2 = y^T P y with P the orthogonal
    // projection onto span{(1,0,1,0)}^perp.
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(4, 4);
    Eigen::VectorXd tau(4);
    tau << 1, 0, 1, 0;
    tau /= std::sqrt(2.0);
    P -= tau * tau.transpose();
    // Rigid motion: both particles rotated by -theta about the line's base
    // point. Q in lab coordinates is G^T P G with G = blockdiag(Rot, Rot).
    double c = std::cos(line.angle), sn = std::sin(line.angle);
    Eigen::Matrix2d rot;  // rotation by -theta
    rot << c, sn, -sn, c;
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(4, 4);
    G.block(0, 0, 2, 2) = rot;
    G.block(2, 2, 2, 2) = rot;
    s.Q = G.transpose() * P * G;
    Eigen::VectorXd ctr(4);
    ctr << line.point[0], line.point[1], line.point[0], line.point[1];
    s.center = ctr;
    s.kappa = 1.0;
    s.delta_constant = 8.0 * M_PI;
    // Transverse in-plane direction: unit vector with v^T Q v = 1.
    Eigen::VectorXd v = Eigen::VectorXd::Zero(4);
    Eigen::Vector2d perp(-sn, c);
    v[0] = perp[0];
    v[1] = perp[1];
    s.reduced_direction = v;
    return s;
}

VectorFieldSpec diag_1d_weight(double epsilon) {
    if (epsilon < 0) throw std::invalid_argument("diag_1d_weight: epsilon must be >= 0");
    VectorFieldSpec s;
    s.kind = WeightKind::diag1d;
    s.ambient_dim = 4;
    s.epsilon = epsilon;
    Eigen::VectorXd e = Eigen::VectorXd::Ones(4) / 2.0;
    s.Q = Eigen::MatrixXd::Identity(4, 4) - e * e.transpose();
    s.center = Eigen::VectorXd::Zero(4);
    s.kappa = 1.0;
    s.delta_constant = 8.0 * M_PI;
    Eigen::VectorXd v(4);
    v << 1, -1, 0, 0;
    v /= std::sqrt(2.0);
    s.reduced_direction = v;
    return s;
}

FieldIdentityReport verify_field_identities(const VectorFieldSpec& spec,
                                            std::span<const std::vector<double>> sample_points,
                                            double fd_step) {
    FieldIdentityReport rep;
    rep.min_eigenvalue = std::numeric_limits<double>::infinity();
    const int d = spec.ambient_dim;
    std::vector<double> xp(d);
    for (const auto& pt : sample_points) {
        Eigen::MatrixXd J = spec.jacobian(pt);
        rep.max_symmetry_residual =
            std::max(rep.max_symmetry_residual, (J - J.transpose()).cwiseAbs().maxCoeff());
        rep.max_trace_div_residual =
            std::max(rep.max_trace_div_residual, std::abs(J.trace() - spec.div(pt)));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (J + J.transpose()));
        rep.min_eigenvalue = std::min(rep.min_eigenvalue, es.eigenvalues().minCoeff());
        rep.max_x_norm = std::max(rep.max_x_norm, spec.x_bound_norm(pt));
        // Central differences of a against X, and of X against the Jacobian.
        Eigen::VectorXd X = spec.gradient(pt);
        for (int j = 0; j < d; ++j) {
            xp.assign(pt.begin(), pt.end());
            xp[j] = pt[j] + fd_step;
            double a_plus = spec.weight(xp);
            Eigen::VectorXd X_plus = spec.gradient(xp);
            xp[j] = pt[j] - fd_step;
            double a_minus = spec.weight(xp);
            Eigen::VectorXd X_minus = spec.gradient(xp);
            double fd_grad = (a_plus - a_minus) / (2.0 * fd_step);
            rep.max_gradient_fd_residual =
                std::max(rep.max_gradient_fd_residual, std::abs(fd_grad - X[j]));
            Eigen::VectorXd fd_col = (X_plus - X_minus) / (2.0 * fd_step);
            rep.max_jacobian_fd_residual =
                std::max(rep.max_jacobian_fd_residual, (fd_col - J.col(j)).cwiseAbs().maxCoeff());
        }
        ++rep.n_points;
    }
    if (rep.n_points == 0) rep.min_eigenvalue = 0.0;
    return rep;
}

std::vector<DeltaLimitRow> delta_limit_check(const VectorFieldSpec& spec, double test_gaussian_width,
                                             std::span<const double> epsilons) {
    if (spec.delta_constant == 0.0)
        throw std::invalid_argument("delta_limit_check: weight has no delta limit");
    const double w2 = test_gaussian_width * test_gaussian_width;
    std::vector<DeltaLimitRow> rows;
    for (double eps : epsilons) {
        if (!(eps > 0)) throw std::invalid_argument("delta_limit_check: epsilons must be positive");
        VectorFieldSpec se = spec;
        se.epsilon = eps;
        auto reduced = [&](double r) {
            Eigen::VectorXd x = se.center + r * se.reduced_direction;
            std::vector<double> pt(x.data(), x.data() + x.size());
            return se.neg_lap_div(pt);
        };
        auto integrand = [&](double r) {
            return 4.0 * M_PI * r * r * reduced(r) * std::exp(-r * r / w2);
        };
        // The integrand lives on scale eps near 0 and decays like the
        // Gaussian; split the range so the adaptive rule resolves both.
        double inner = 20.0 * eps;
        double outer = std::max(inner * 2.0, 12.0 * test_gaussian_width);
        double val = adaptive_simpson(integrand, 0.0, inner, 1e-12) +
                     adaptive_simpson(integrand, inner, outer, 1e-12);
        DeltaLimitRow row;
        row.epsilon = eps;
        row.value = val;
        row.target = spec.delta_constant;  // phi(0) = 1
        row.rel_error = std::abs(val - row.target) / row.target;
        rows.push_back(row);
    }
    return rows;
}

std::string to_string(WeightKind k) {
    switch (k) {
        case WeightKind::radial: return "radial";
        case WeightKind::pair3d: return "pair3d";
        case WeightKind::line_diag2d: return "line_diag2d";
        case WeightKind::diag1d: return "diag1d";
    }
    return "unknown";
}

}  // namespace morawetz
