#include "kinlab/structure_factor.hpp"

#include <cmath>
#include <numbers>

#include "kinlab/errors.hpp"

namespace kinlab {

namespace {

void require_transfer(double q_mod) {
    if (!(q_mod > 0.0)) throw DomainError("structure factor is singular at zero momentum transfer");
}

double log_prefactor(double q_mod, const PhysicalParams& pp) {
    return 0.5 * std::log(pp.inv_temperature * pp.gas_mass / (2.0 * std::numbers::pi)) - std::log(q_mod);
}

}  // namespace

double energy_transfer(const TransferVector& q, const MomentumVector& p, const PhysicalParams& params) {
    return norm_sq(q) / (2.0 * params.test_mass) + dot(p, q) / params.test_mass;
}

double energy_transfer_1d(double q, double p, const PhysicalParams& params) {
    return q * q / (2.0 * params.test_mass) + p * q / params.test_mass;
}

double log_structure_factor_mb(double q_mod, double energy, const PhysicalParams& params) {
    require_transfer(q_mod);
    const double m = params.gas_mass;
    // (2mE + q^2)^2 / q^2 written as (2mE/q + q)^2 to keep it finite for small q.
    const double a = 2.0 * m * energy / q_mod + q_mod;
    return log_prefactor(q_mod, params) - params.inv_temperature / (8.0 * m) * a * a;
}

double log_structure_factor_brownian(double q_mod, double energy, const PhysicalParams& params) {
    require_transfer(q_mod);
    const double beta = params.inv_temperature;
    return log_prefactor(q_mod, params) - beta / (8.0 * params.gas_mass) * q_mod * q_mod - 0.5 * beta * energy;
}

double log_structure_factor(StructureFactorForm form, double q_mod, double energy, const PhysicalParams& params) {
    return form == StructureFactorForm::maxwell_boltzmann ? log_structure_factor_mb(q_mod, energy, params)
                                                          : log_structure_factor_brownian(q_mod, energy, params);
}

double structure_factor_mb(double q_mod, double energy, const PhysicalParams& params) {
    return std::exp(log_structure_factor_mb(q_mod, energy, params));
}

double structure_factor_brownian(double q_mod, double energy, const PhysicalParams& params) {
    return std::exp(log_structure_factor_brownian(q_mod, energy, params));
}

double structure_factor(StructureFactorForm form, double q_mod, double energy, const PhysicalParams& params) {
    return std::exp(log_structure_factor(form, q_mod, energy, params));
}

double structure_factor_mb(const TransferVector& q, const MomentumVector& p, const PhysicalParams& params) {
    return structure_factor_mb(norm(q), energy_transfer(q, p, params), params);
}

double structure_factor_brownian(const TransferVector& q, const MomentumVector& p, const PhysicalParams& params) {
    return structure_factor_brownian(norm(q), energy_transfer(q, p, params), params);
}

double structure_factor(StructureFactorForm form, const TransferVector& q, const MomentumVector& p,
                        const PhysicalParams& params) {
    return structure_factor(form, norm(q), energy_transfer(q, p, params), params);
}

double relative_detailed_balance_residual(double q_mod, double energy, const PhysicalParams& params,
                                          StructureFactorForm which) {
    const double log_fwd = log_structure_factor(which, q_mod, energy, params);
    const double log_rev = log_structure_factor(which, q_mod, -energy, params);
    // 1 - exp(-beta E) S(-E) / S(E)
    return -std::expm1(log_rev - params.inv_temperature * energy - log_fwd);
}

double detailed_balance_residual(double q_mod, double energy, const PhysicalParams& params,
                                 StructureFactorForm which) {
    const double rel = relative_detailed_balance_residual(q_mod, energy, params, which);
    if (rel == 0.0) return 0.0;
    return rel * structure_factor(which, q_mod, energy, params);
}

double differential_cross_section(const MomentumVector& p, const TransferVector& q, const PhysicalParams& params,
                                  const CrossSection& xs) {
    const double p_mod = norm(p);
    if (!(p_mod > 0.0)) throw DomainError("differential cross-section needs a nonzero incoming momentum");
    const double q_mod = norm(q);
    const double sigma = xs(q_mod);
    const double s = structure_factor_mb(q_mod, energy_transfer(q, p, params), params);
    return norm(p + q) / p_mod * sigma * s;
}

}  // namespace kinlab
