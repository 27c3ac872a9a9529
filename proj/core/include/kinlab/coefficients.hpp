#pragma once

#include "kinlab/cross_section.hpp"
#include "kinlab/physical_params.hpp"

namespace kinlab {

/// Friction coefficient of the Brownian-limit Kramers equation,
///   eta = (1/6) (n/M^3) beta sqrt(beta m / 2 pi) Int d^3q q Sigma(q) exp(-(beta/8m)(1+2 alpha) q^2),
/// by adaptive radial quadrature to relative tolerance rel_tol.
double friction_coefficient(const PhysicalParams& params, const CrossSection& xs, double rel_tol = 1e-10);

/// Upper radial cutoff used by friction_coefficient: 10 sqrt(8m / (beta (1+2 alpha))).
double friction_cutoff(const PhysicalParams& params);

/// Quantum position-diffusion coefficient D_xx = eta beta hbar^2 / (16 M).
double position_diffusion_coefficient(double eta, const PhysicalParams& params);

/// Einstein coefficient 1 / (eta M beta).
double einstein_coefficient(double eta, const PhysicalParams& params);

/// Smoluchowski coefficient including the quantum correction, 1/(eta M beta) + D_xx.
double smoluchowski_coefficient(double eta, const PhysicalParams& params);

/// 1 + (eta beta hbar)^2 / 16, the quantum/classical ratio of Smoluchowski coefficients.
double smoluchowski_correction_factor(double eta, const PhysicalParams& params);

}  // namespace kinlab
