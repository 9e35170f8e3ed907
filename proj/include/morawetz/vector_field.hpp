#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace morawetz {

enum class WeightKind { radial, pair3d, line_diag2d, diag1d };

// A straight line in the plane: point on the line plus direction angle.
struct Line2D {
    std::array<double, 2> point{0.0, 0.0};
    double angle = 0.0;
    std::array<double, 2> direction() const { return {std::cos(angle), std::sin(angle)}; }
};

// Regularized weight geometry. Every supported weight has the form
//   a_eps(x) = sqrt((x-c)^T Q (x-c) + eps^2)
// with Q symmetric PSD satisfying Q^2 = kappa * Q, so all derived
// quantities (X = grad a, the Jacobian, div X, -Lap div X) come from exact
// differentiation of a_eps:
//   X        = Q y / R,                      y = x - c,  R = sqrt(q + eps^2)
//   Jacobian = Q / R - (Qy)(Qy)^T / R^3
//   div X    = tr(Q)/R - kappa q / R^3
// and -Lap(div X) in closed form below. Regularizing the single function
// a keeps symmetry and trace-vs-div exact at finite eps.
struct VectorFieldSpec {
    WeightKind kind = WeightKind::radial;
    int ambient_dim = 0;
    double epsilon = 0.0;
    Eigen::MatrixXd Q;
    Eigen::VectorXd center;
    double kappa = 1.0;
    // Limit constant of int (-Lap div X) phi over the reduced 3-variable
    // (8*pi, 32*pi, 8*pi); 0 when no delta limit applies.
    double delta_constant = 0.0;
    // Unit direction with v^T Q v = 1, used to parametrize the reduced
    // radial variable for the delta-limit quadrature.
    Eigen::VectorXd reduced_direction;
    // Block size for the |X| bound (pair3d: the printed per-solution blocks
    // of size 3 satisfy |X_block| <= 1; the full 6-vector has |X| = sqrt(2)).
    int x_bound_block = 0;  // 0 => whole vector

    double q_form(std::span<const double> x) const;
    double weight(std::span<const double> x) const;
    Eigen::VectorXd gradient(std::span<const double> x) const;
    Eigen::MatrixXd jacobian(std::span<const double> x) const;
    double div(std::span<const double> x) const;
    double neg_lap_div(std::span<const double> x) const;
    // Norm of X entering the |X| <= 1 bound (blockwise for pair3d).
    double x_bound_norm(std::span<const double> x) const;
    // Throws when evaluated exactly on the singular set at eps = 0; at
    // eps > 0 every point is regular.
    void check_regular(std::span<const double> x) const;
};

VectorFieldSpec radial_weight(int n, double epsilon);
VectorFieldSpec pair_weight_3d(double epsilon);
VectorFieldSpec line_diagonal_weight_2d(const Line2D& line, double epsilon);
VectorFieldSpec diag_1d_weight(double epsilon);

struct FieldIdentityReport {
    double max_symmetry_residual = 0.0;
    double max_trace_div_residual = 0.0;
    double max_gradient_fd_residual = 0.0;
    double max_jacobian_fd_residual = 0.0;
    double min_eigenvalue = 0.0;
    double max_x_norm = 0.0;
    int n_points = 0;
    bool ok(double fd_tol = 1e-6) const {
        return max_symmetry_residual <= 1e-12 && max_trace_div_residual <= 1e-12 &&
               max_gradient_fd_residual <= fd_tol && max_jacobian_fd_residual <= fd_tol &&
               min_eigenvalue >= -1e-12;
    }
};

FieldIdentityReport verify_field_identities(const VectorFieldSpec& spec,
                                            std::span<const std::vector<double>> sample_points,
                                            double fd_step = 1e-5);

struct DeltaLimitRow {
    double epsilon = 0.0;
    double value = 0.0;
    double target = 0.0;
    double rel_error = 0.0;
};

// For each eps, computes int_{R^3} (-Lap div X)_eps * phi(|z|) dz by
// adaptive radial quadrature in the reduced variable, with
// phi(r) = exp(-r^2 / width^2); target is delta_constant * phi(0).
std::vector<DeltaLimitRow> delta_limit_check(const VectorFieldSpec& spec, double test_gaussian_width,
                                             std::span<const double> epsilons);

std::string to_string(WeightKind k);

}  // namespace morawetz
