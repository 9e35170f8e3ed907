#pragma once

#include "morawetz/grid.hpp"

#include <array>
#include <vector>

namespace morawetz {

// Pointwise densities of a state u:
//   rho      = |u|^2 / 2
//   p_k      = Im(conj(u) grad_k u)
//   sigma_jk = 2 Re(grad_j u grad_k conj(u))
// Gradients are spectral. sigma is stored as the dim x dim symmetric
// tensor in row-major order.
struct FieldDensities {
    SpectralGrid grid;
    std::vector<double> rho;
    std::array<std::vector<double>, 3> momentum;      // [axis]
    std::array<std::vector<double>, 9> sigma;         // [j*dim + k]
    std::array<std::vector<cplx>, 3> gradient;        // grad_k u (kept for sigma-form checks)
};

FieldDensities densities(const ComplexField& field);

struct ConservedIntegrals {
    double mass = 0.0;    // int |u|^2
    double energy = 0.0;  // int |grad u|^2 / 2 + int |u|^{p+1} / (p+1)
    std::array<double, 3> momentum{0.0, 0.0, 0.0};  // Im int conj(u) grad u
};

ConservedIntegrals conserved_integrals(const ComplexField& field, double p, double lambda = 1.0);

// Pressure term of the local momentum law: 2^{(p+1)/2} (p-1)/(p+1) rho^{(p+1)/2}.
RealField nonlinear_pressure(const RealField& rho, double p);

struct ConservationResiduals {
    double mass_residual = 0.0;      // L2 norm of d_t rho - div p
    double momentum_residual = 0.0;  // L2 norm (summed over k) of the momentum law residual
};

// Central time difference across three snapshots spaced dt against the
// spectral divergence of the printed fluxes. lambda scales the nonlinear
// pressure (focusing flag flips it).
ConservationResiduals conservation_residuals(const ComplexField& before, const ComplexField& at,
                                             const ComplexField& after, double dt, double p,
                                             double lambda = 1.0);

// Max relative residual of the Madelung form sigma = (p p^T + grad rho grad rho^T)/rho
// over points with rho > floor_frac * max(rho).
double madelung_residual(const ComplexField& field, double floor_frac = 1e-6);

}  // namespace morawetz
