#pragma once

#include "morawetz/estimate.hpp"
#include "morawetz/evolve.hpp"
#include "morawetz/grid.hpp"
#include "morawetz/vector_field.hpp"

namespace morawetz {

// Morawetz action M(t) = -int X . p dx for the given weight (the sign and
// normalization follow the derivation the monotonicity argument uses).
double morawetz_action(const ComplexField& field, const VectorFieldSpec& spec);

struct VirialTerms {
    double bilaplacian_term = 0.0;  // int (-Lap div X)_eps rho
    double nonlinear_term = 0.0;    // int (div X) * pressure(rho)
    double sigma_term = 0.0;        // int grad_j X^k sigma_k^j (tensor contraction)
    double sigma_term_closed_form = 0.0;  // same via the radial closed form
    double sigma_discrepancy = 0.0;
    double total() const { return bilaplacian_term + nonlinear_term + sigma_term; }
};

// The three right-hand-side terms of d_t M for the radial weight,
// computed with the regularized analytic weight derivatives.
VirialTerms virial_rhs_terms(const ComplexField& field, const VectorFieldSpec& spec, double p,
                             double lambda = 1.0);

// int |u|^exponent / sqrt(|x-center|^2 + eps^2) dx at one time.
double weighted_lp_integral(const ComplexField& field, const Point& center, double exponent,
                            double epsilon);

// Gaussian-smoothed |u(center)|^2 with smoothing width eps (the discrete
// realization of the 8 pi delta term).
double smoothed_center_density(const ComplexField& field, const Point& center, double epsilon);

// Time-trapezoid of weighted_lp_integral over stored snapshots.
double weighted_spacetime_norm(const std::vector<ComplexField>& snapshots,
                               const std::vector<double>& times, const Point& center,
                               double exponent, double epsilon);

// int |u(t,0)|^2 dt + int int |u|^{p+1}/|x| dx dt  <~  sup_t ||u||_{H^1/2}^2,
// from trace channels center_density, weighted_pp1, hhalf_sq. The constant
// is unspecified, so the verdict is informational.
EstimateReport lin_strauss_check(const DiagnosticTrace& trace, double p);

}  // namespace morawetz
