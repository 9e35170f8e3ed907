#pragma once

#include "morawetz/estimate.hpp"
#include "morawetz/evolve.hpp"
#include "morawetz/grid.hpp"
#include "morawetz/vector_field.hpp"

#include <array>
#include <vector>

namespace morawetz {

// Sampled curve in the plane with quadrature weights for int dl.
struct Curve2D {
    std::vector<std::array<double, 2>> samples;
    std::vector<double> arclength_weights;
};

// Full line through the box, clipped to the chord inside [-L/2, L/2)^2,
// sampled uniformly with trapezoid weights.
Curve2D make_line_curve(const SpectralGrid& grid, const Line2D& line, int n_samples);

// Pair interaction action over R^3 x R^3,
//   M = -int int [2 rho(z) p(y) - 2 rho(y) p(z)] . K(y-z) dy dz,
// K(w) = w / sqrt(|w|^2 + eps^2), evaluated by FFT convolution with the
// kernel tabulated on the periodic difference grid (K(0) = 0 at eps = 0).
double interaction_action_3d(const ComplexField& field, double epsilon);

// Brute-force O(M^2) pairwise oracle for the same periodic sum.
double interaction_action_3d_direct(const ComplexField& field, double epsilon);

// Line-diagonal interaction action over R^2 x R^2: exact double sum over
// grid-point pairs of the tensor momentum contracted with the lifted-line
// weight. The weight depends on absolute transverse coordinates, so no
// difference-kernel reduction applies; cost is O(M^2) with M = N^2.
double interaction_action_2d(const ComplexField& field, const Line2D& line, double epsilon,
                             int max_n = 64);

// Independent quadruple-loop oracle using the generic weight evaluators.
double interaction_action_2d_direct(const ComplexField& field, const Line2D& line, double epsilon,
                                    int max_n = 16);

// Quadrilinear 1D action: four-fold sum of the R^4 tensor momentum
// contracted with the diagonal-distance weight.
double interaction_action_1d(const ComplexField& field, double epsilon, int max_n = 64);
double interaction_action_1d_direct(const ComplexField& field, double epsilon, int max_n = 20);

// sum_i |u(x(l_i))|^4 w_i by trigonometric interpolation.
double line_restricted_l4(const ComplexField& field, const Curve2D& curve);

// Average of full-line |u|^4 integrals over n_theta directions through
// `center`, normalized so the n_theta -> infinity limit is
// int |u|^4 / |x - center| dx. epsilon is accepted for interface parity
// with the weighted integrals; the line integrals themselves are regular.
double angular_average_weighted_l4(const ComplexField& field, const Point& center, int n_theta,
                                   double epsilon, int samples_per_line = 0);

// Oracle for int |u|^4 / |x-center| dx: spectral upsampling plus
// singularity subtraction against a Gaussian with closed-form weighted
// integral.
double weighted_l4_direct_quadrature(const ComplexField& field, const Point& center,
                                     int upsample_factor = 4);

// Exact spectral zero-padding to a factor-times finer grid.
ComplexField spectral_upsample(const ComplexField& field, int factor);

// Monotonicity, pointwise derivative bound, and fundamental-theorem
// inequality for the recorded M(t)/instantaneous-integral channel pair of
// the given weight kind, plus the informational action-bound ratio.
std::vector<EstimateReport> monotonicity_and_ftc_check(const DiagnosticTrace& trace,
                                                       WeightKind kind, double tol_rel = 0.02);

// L2 residual of the tensor momentum law contracted with the lifted-line
// weight, on the explicit 4D product grid. u1/u2 are three consecutive
// snapshots of each factor, spaced dt.
double tensor_residual_check_4d(const std::array<ComplexField, 3>& u1,
                                const std::array<ComplexField, 3>& u2, const Line2D& line,
                                double epsilon, double dt, int max_n = 24);

}  // namespace morawetz
