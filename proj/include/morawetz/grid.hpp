#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace morawetz {

using cplx = std::complex<double>;
using Point = std::array<double, 3>;  // trailing components unused below dim

// Periodic box [-L/2, L/2)^dim with n points per axis, x_i = -L/2 + i*h.
//
// DFT convention (fixed repo-wide): forward is the plain unnormalized DFT
//   u_hat[m] = sum_j u[j] exp(-2*pi*i*<m,j>/n),
// inverse carries the 1/n^dim factor. Quadrature of integrals carries the
// volume factor h^dim, so Parseval reads
//   h^dim * sum_j |u[j]|^2 = (h^dim / n^dim) * sum_m |u_hat[m]|^2.
struct SpectralGrid {
    int dim = 0;
    int n = 0;
    double length = 0.0;
    double h = 0.0;
    // Wavenumbers 2*pi*m/L in FFT storage order: m = 0..n/2-1, -n/2..-1.
    std::vector<double> wavenumbers;

    std::size_t size() const {
        std::size_t s = 1;
        for (int d = 0; d < dim; ++d) s *= static_cast<std::size_t>(n);
        return s;
    }
    double coord(int i) const { return -0.5 * length + i * h; }
    double cell_volume() const {
        double v = 1.0;
        for (int d = 0; d < dim; ++d) v *= h;
        return v;
    }
    // Wraps a physical coordinate into [-L/2, L/2).
    double wrap(double x) const;
};

SpectralGrid make_grid(int dim, int n_points, double box_length);

struct ComplexField {
    SpectralGrid grid;
    std::vector<cplx> values;
};

struct RealField {
    SpectralGrid grid;
    std::vector<double> values;
};

ComplexField make_field(const SpectralGrid& g);

bool all_finite(const ComplexField& f);

enum class Direction { forward, inverse };

// Out-of-place DFT over all axes; see normalization note on SpectralGrid.
ComplexField transform(const ComplexField& f, Direction dir);
void transform_in_place(std::vector<cplx>& data, const SpectralGrid& g, Direction dir);

// Multiplies the spectrum by (i*k_axis)^order; order 1 or 2. The unpaired
// Nyquist mode is dropped at order 1 so real fields keep real derivatives.
ComplexField spectral_derivative(const ComplexField& f, int axis, int order);

// h^dim * sum |u|^2 and its square root.
double l2_norm_sq(const ComplexField& f);
double l2_norm(const ComplexField& f);

// Homogeneous Sobolev seminorm ( (h/n)^dim * sum_k |k|^{2s} |u_hat|^2 )^{1/2}.
double sobolev_seminorm(const ComplexField& f, double s);

// Trigonometric (Fourier-series) evaluation at arbitrary points, periodic wrap.
std::vector<cplx> interpolate(const ComplexField& f, std::span<const Point> points);

// h^dim * sum of a real field.
double grid_integral(const RealField& f);

// Fraction of spectral mass |u_hat|^2 carried by modes with |m|_inf in the
// top third of the resolved band (under-resolution monitor).
double spectral_tail_fraction(const ComplexField& f);

// Fraction of mass in the outer shell max_i |x_i| >= frac * L/2.
double boundary_mass_fraction(const ComplexField& f, double frac = 0.9);

// Iteration helper: decodes a linear index (row-major, axis 0 slowest)
// into per-axis indices.
inline void decode_index(const SpectralGrid& g, std::size_t lin, int idx[3]) {
    for (int d = g.dim - 1; d >= 0; --d) {
        idx[d] = static_cast<int>(lin % static_cast<std::size_t>(g.n));
        lin /= static_cast<std::size_t>(g.n);
    }
}

}  // namespace morawetz
