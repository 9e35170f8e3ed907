#include "morawetz/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace morawetz {

double SpectralGrid::wrap(double x) const {
    double y = std::fmod(x + 0.5 * length, length);
    if (y < 0) y += length;
    return y - 0.5 * length;
}

SpectralGrid make_grid(int dim, int n_points, double box_length) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("make_grid: dim must be in {1,2,3}");
    if (n_points < 8 || n_points % 2 != 0)
        throw std::invalid_argument("make_grid: n_points must be even and >= 8");
    if (!(box_length > 0)) throw std::invalid_argument("make_grid: box_length must be positive");
    SpectralGrid g;
    g.dim = dim;
    g.n = n_points;
    g.length = box_length;
    g.h = box_length / n_points;
    g.wavenumbers.resize(n_points);
    const double dk = 2.0 * M_PI / box_length;
    for (int i = 0; i < n_points; ++i) {
        int m = (i < n_points / 2) ? i : i - n_points;
        g.wavenumbers[i] = dk * m;
    }
    return g;
}

ComplexField make_field(const SpectralGrid& g) {
    return ComplexField{g, std::vector<cplx>(g.size(), cplx{0.0, 0.0})};
}

bool all_finite(const ComplexField& f) {
    for (const cplx& v : f.values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

namespace {

// Plan cache keyed by (dim, n, sign). Plans are created with FFTW_UNALIGNED
// so they can execute on any buffer via fftw_execute_dft.
fftw_plan get_plan(const SpectralGrid& g, int sign) {
    static std::map<std::tuple<int, int, int>, fftw_plan> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_tuple(g.dim, g.n, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<cplx> scratch(g.size());
    int dims[3] = {g.n, g.n, g.n};
    fftw_plan p = fftw_plan_dft(g.dim, dims, reinterpret_cast<fftw_complex*>(scratch.data()),
                                reinterpret_cast<fftw_complex*>(scratch.data()), sign,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(key, p);
    return p;
}

}  // namespace

void transform_in_place(std::vector<cplx>& data, const SpectralGrid& g, Direction dir) {
    if (data.size() != g.size()) throw std::invalid_argument("transform: size mismatch");
    int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
    fftw_plan p = get_plan(g, sign);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data.data()),
                     reinterpret_cast<fftw_complex*>(data.data()));
    if (dir == Direction::inverse) {
        const double scale = 1.0 / static_cast<double>(g.size());
        for (cplx& v : data) v *= scale;
    }
}

ComplexField transform(const ComplexField& f, Direction dir) {
    ComplexField out = f;
    transform_in_place(out.values, out.grid, dir);
    return out;
}

ComplexField spectral_derivative(const ComplexField& f, int axis, int order) {
    const SpectralGrid& g = f.grid;
    if (axis < 0 || axis >= g.dim) throw std::invalid_argument("spectral_derivative: axis out of range");
    if (order != 1 && order != 2) throw std::invalid_argument("spectral_derivative: order must be 1 or 2");
    ComplexField out = transform(f, Direction::forward);
    const std::size_t total = g.size();
    int idx[3];
    for (std::size_t i = 0; i < total; ++i) {
        decode_index(g, i, idx);
        double k = g.wavenumbers[idx[axis]];
        // The unpaired Nyquist mode (m = -n/2 with no +n/2 partner) is
        // dropped for odd derivatives so that real fields keep exactly
        // real first derivatives; it stays in the (even) second derivative.
        if (order == 1 && idx[axis] == g.n / 2) k = 0.0;
        cplx mult = (order == 1) ? cplx{0.0, k} : cplx{-k * k, 0.0};
        out.values[i] *= mult;
    }
    transform_in_place(out.values, g, Direction::inverse);
    return out;
}

double l2_norm_sq(const ComplexField& f) {
    double s = 0.0;
    for (const cplx& v : f.values) s += std::norm(v);
    return s * f.grid.cell_volume();
}

double l2_norm(const ComplexField& f) { return std::sqrt(l2_norm_sq(f)); }

double sobolev_seminorm(const ComplexField& f, double s) {
    if (s < 0) throw std::invalid_argument("sobolev_seminorm: s must be >= 0");
    const SpectralGrid& g = f.grid;
    ComplexField spec = transform(f, Direction::forward);
    const double vol = g.cell_volume() / static_cast<double>(g.size());
    double acc = 0.0;
    int idx[3];
    for (std::size_t i = 0; i < g.size(); ++i) {
        decode_index(g, i, idx);
        double k2 = 0.0;
        for (int d = 0; d < g.dim; ++d) {
            double k = g.wavenumbers[idx[d]];
            k2 += k * k;
        }
        double w = (s == 0.0) ? 1.0 : std::pow(k2, s);
        acc += w * std::norm(spec.values[i]);
    }
    return std::sqrt(acc * vol);
}

std::vector<cplx> interpolate(const ComplexField& f, std::span<const Point> points) {
    const SpectralGrid& g = f.grid;
    ComplexField spec = transform(f, Direction::forward);
    const int n = g.n;
    const double inv_total = 1.0 / static_cast<double>(g.size());
    std::vector<cplx> out(points.size());
    // Per-axis phase tables e^{i k (x + L/2)}; the shift makes the phases
    // match the FFT index convention x_j + L/2 = j*h.
    std::vector<cplx> phase(static_cast<std::size_t>(g.dim) * n);
    for (std::size_t p = 0; p < points.size(); ++p) {
        for (int d = 0; d < g.dim; ++d) {
            double xs = g.wrap(points[p][d]) + 0.5 * g.length;
            for (int i = 0; i < n; ++i) {
                double ph = g.wavenumbers[i] * xs;
                phase[static_cast<std::size_t>(d) * n + i] = cplx{std::cos(ph), std::sin(ph)};
            }
        }
        cplx acc{0.0, 0.0};
        int idx[3];
        for (std::size_t i = 0; i < g.size(); ++i) {
            decode_index(g, i, idx);
            cplx ph = phase[static_cast<std::size_t>(0) * n + idx[0]];
            for (int d = 1; d < g.dim; ++d) ph *= phase[static_cast<std::size_t>(d) * n + idx[d]];
            acc += spec.values[i] * ph;
        }
        out[p] = acc * inv_total;
    }
    return out;
}

double grid_integral(const RealField& f) {
    double s = 0.0;
    for (double v : f.values) s += v;
    return s * f.grid.cell_volume();
}

double spectral_tail_fraction(const ComplexField& f) {
    const SpectralGrid& g = f.grid;
    ComplexField spec = transform(f, Direction::forward);
    const int cut = g.n / 3;  // top third of the resolved band |m| <= n/2
    double total = 0.0, tail = 0.0;
    int idx[3];
    for (std::size_t i = 0; i < g.size(); ++i) {
        decode_index(g, i, idx);
        int mmax = 0;
        for (int d = 0; d < g.dim; ++d) {
            int m = (idx[d] < g.n / 2) ? idx[d] : idx[d] - g.n;
            mmax = std::max(mmax, std::abs(m));
        }
        double e = std::norm(spec.values[i]);
        total += e;
        if (mmax >= cut) tail += e;
    }
    return total > 0 ? tail / total : 0.0;
}

double boundary_mass_fraction(const ComplexField& f, double frac) {
    const SpectralGrid& g = f.grid;
    const double edge = frac * 0.5 * g.length;
    double total = 0.0, outer = 0.0;
    int idx[3];
    for (std::size_t i = 0; i < g.size(); ++i) {
        decode_index(g, i, idx);
        double m = std::norm(f.values[i]);
        total += m;
        double amax = 0.0;
        for (int d = 0; d < g.dim; ++d) amax = std::max(amax, std::abs(g.coord(idx[d])));
        if (amax >= edge) outer += m;
    }
    return total > 0 ? outer / total : 0.0;
}

}  // namespace morawetz
