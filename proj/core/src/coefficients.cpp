#include "kinlab/coefficients.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kinlab/quadrature.hpp"

namespace kinlab {

double friction_cutoff(const PhysicalParams& params) {
    const double alpha = params.mass_ratio();
    return 10.0 * std::sqrt(8.0 * params.gas_mass / (params.inv_temperature * (1.0 + 2.0 * alpha)));
}

double friction_coefficient(const PhysicalParams& params, const CrossSection& xs, double rel_tol) {
    params.validate();
    if (xs.is_zero()) return 0.0;

    const double M = params.test_mass;
    const double m = params.gas_mass;
    const double beta = params.inv_temperature;
    const double a = beta / (8.0 * m) * (1.0 + 2.0 * params.mass_ratio());
    const double q_max = friction_cutoff(params);

    // d^3q -> 4 pi q^2 dq; integrand q^3 Sigma(q) exp(-a q^2)
    const auto radial = [&](double q) { return q * q * q * xs(q) * std::exp(-a * q * q); };
    const auto kinks = xs.breakpoints(0.0, q_max);
    const double integral = 4.0 * std::numbers::pi * integrate_adaptive(radial, 0.0, q_max, rel_tol, kinks).value;

    return params.density / (6.0 * M * M * M) * beta * std::sqrt(beta * m / (2.0 * std::numbers::pi)) * integral;
}

double position_diffusion_coefficient(double eta, const PhysicalParams& params) {
    if (!(eta >= 0.0)) throw std::invalid_argument("friction coefficient must be >= 0");
    return eta * params.inv_temperature * params.hbar * params.hbar / (16.0 * params.test_mass);
}

double einstein_coefficient(double eta, const PhysicalParams& params) {
    if (!(eta > 0.0)) throw std::invalid_argument("Einstein coefficient needs a positive friction coefficient");
    return 1.0 / (eta * params.test_mass * params.inv_temperature);
}

double smoluchowski_coefficient(double eta, const PhysicalParams& params) {
    return einstein_coefficient(eta, params) + position_diffusion_coefficient(eta, params);
}

double smoluchowski_correction_factor(double eta, const PhysicalParams& params) {
    const double tau_ratio = eta * params.inv_temperature * params.hbar;
    return 1.0 + tau_ratio * tau_ratio / 16.0;
}

}  // namespace kinlab
