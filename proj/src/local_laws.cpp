#include "morawetz/local_laws.hpp"

#include <cmath>
#include <stdexcept>

namespace morawetz {

FieldDensities densities(const ComplexField& field) {
    const SpectralGrid& g = field.grid;
    const std::size_t total = g.size();
    FieldDensities d;
    d.grid = g;
    d.rho.resize(total);
    for (std::size_t i = 0; i < total; ++i) d.rho[i] = 0.5 * std::norm(field.values[i]);
    for (int a = 0; a < g.dim; ++a) {
        ComplexField du = spectral_derivative(field, a, 1);
        d.gradient[a] = std::move(du.values);
        d.momentum[a].resize(total);
        for (std::size_t i = 0; i < total; ++i)
            d.momentum[a][i] = std::imag(std::conj(field.values[i]) * d.gradient[a][i]);
    }
    for (int j = 0; j < g.dim; ++j)
        for (int k = 0; k < g.dim; ++k) {
            auto& s = d.sigma[j * g.dim + k];
            s.resize(total);
            for (std::size_t i = 0; i < total; ++i)
                s[i] = 2.0 * std::real(d.gradient[j][i] * std::conj(d.gradient[k][i]));
        }
    return d;
}

ConservedIntegrals conserved_integrals(const ComplexField& field, double p, double lambda) {
    const SpectralGrid& g = field.grid;
    const double vol = g.cell_volume();
    ConservedIntegrals out;
    double grad2 = 0.0, pot = 0.0;
    for (int a = 0; a < g.dim; ++a) {
        ComplexField du = spectral_derivative(field, a, 1);
        double pa = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            grad2 += std::norm(du.values[i]);
            pa += std::imag(std::conj(field.values[i]) * du.values[i]);
        }
        out.momentum[a] = pa * vol;
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
        double m2 = std::norm(field.values[i]);
        out.mass += m2;
        pot += std::pow(m2, 0.5 * (p + 1.0));
    }
    out.mass *= vol;
    out.energy = 0.5 * grad2 * vol + lambda / (p + 1.0) * pot * vol;
    return out;
}

RealField nonlinear_pressure(const RealField& rho, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("nonlinear_pressure: p must be >= 1");
    RealField out{rho.grid, std::vector<double>(rho.values.size())};
    const double coef = std::pow(2.0, 0.5 * (p + 1.0)) * (p - 1.0) / (p + 1.0);
    const double expo = 0.5 * (p + 1.0);
    for (std::size_t i = 0; i < rho.values.size(); ++i) {
        double r = rho.values[i];
        if (r < 0) throw std::invalid_argument("nonlinear_pressure: rho must be >= 0");
        out.values[i] = coef * std::pow(r, expo);
    }
    return out;
}

namespace {

// Spectral divergence of a vector of real fields.
std::vector<double> divergence(const SpectralGrid& g,
                               const std::array<std::vector<double>, 3>& comps) {
    std::vector<double> out(g.size(), 0.0);
    for (int a = 0; a < g.dim; ++a) {
        ComplexField f{g, std::vector<cplx>(g.size())};
        for (std::size_t i = 0; i < g.size(); ++i) f.values[i] = comps[a][i];
        ComplexField df = spectral_derivative(f, a, 1);
        for (std::size_t i = 0; i < g.size(); ++i) out[i] += df.values[i].real();
    }
    return out;
}

double l2_of(const SpectralGrid& g, const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s * g.cell_volume());
}

}  // namespace

ConservationResiduals conservation_residuals(const ComplexField& before, const ComplexField& at,
                                             const ComplexField& after, double dt, double p,
                                             double lambda) {
    const SpectralGrid& g = at.grid;
    if (!(dt > 0)) throw std::invalid_argument("conservation_residuals: dt must be positive");
    FieldDensities db = densities(before), dm = densities(at), da = densities(after);

    ConservationResiduals res;
    // d_t rho = div p.
    std::vector<double> divp = divergence(g, dm.momentum);
    std::vector<double> r(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        r[i] = (da.rho[i] - db.rho[i]) / (2.0 * dt) - divp[i];
    res.mass_residual = l2_of(g, r);

    // d_t p_k = grad_k (pressure - Lap rho) + div_j sigma_jk.
    ComplexField rho_field{g, std::vector<cplx>(g.size())};
    for (std::size_t i = 0; i < g.size(); ++i) rho_field.values[i] = dm.rho[i];
    std::vector<double> lap_rho(g.size(), 0.0);
    for (int a = 0; a < g.dim; ++a) {
        ComplexField d2 = spectral_derivative(rho_field, a, 2);
        for (std::size_t i = 0; i < g.size(); ++i) lap_rho[i] += d2.values[i].real();
    }
    RealField pressure = nonlinear_pressure(RealField{g, dm.rho}, p);
    std::vector<double> scalar_flux(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        scalar_flux[i] = lambda * pressure.values[i] - lap_rho[i];
    ComplexField flux_field{g, std::vector<cplx>(g.size())};
    for (std::size_t i = 0; i < g.size(); ++i) flux_field.values[i] = scalar_flux[i];

    double acc = 0.0;
    for (int k = 0; k < g.dim; ++k) {
        ComplexField grad_flux = spectral_derivative(flux_field, k, 1);
        std::array<std::vector<double>, 3> sig_col;
        for (int j = 0; j < g.dim; ++j) sig_col[j] = dm.sigma[j * g.dim + k];
        std::vector<double> div_sig = divergence(g, sig_col);
        for (std::size_t i = 0; i < g.size(); ++i) {
            double lhs = (da.momentum[k][i] - db.momentum[k][i]) / (2.0 * dt);
            double rhs = grad_flux.values[i].real() + div_sig[i];
            double e = lhs - rhs;
            acc += e * e;
        }
    }
    res.momentum_residual = std::sqrt(acc * g.cell_volume());
    return res;
}

double madelung_residual(const ComplexField& field, double floor_frac) {
    const SpectralGrid& g = field.grid;
    FieldDensities d = densities(field);
    double rho_max = 0.0;
    for (double r : d.rho) rho_max = std::max(rho_max, r);
    const double floor = floor_frac * rho_max;
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (d.rho[i] <= floor) continue;
        double grad_rho[3];
        for (int j = 0; j < g.dim; ++j)
            grad_rho[j] = std::real(std::conj(field.values[i]) * d.gradient[j][i]);
        double diff2 = 0.0, ref2 = 0.0;
        for (int j = 0; j < g.dim; ++j)
            for (int k = 0; k < g.dim; ++k) {
                double s = d.sigma[j * g.dim + k][i];
                double m = (d.momentum[j][i] * d.momentum[k][i] + grad_rho[j] * grad_rho[k]) /
                           d.rho[i];
                diff2 += (s - m) * (s - m);
                ref2 += s * s;
            }
        if (ref2 > 0) worst = std::max(worst, std::sqrt(diff2 / ref2));
    }
    return worst;
}

}  // namespace morawetz
