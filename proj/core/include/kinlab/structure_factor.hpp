#pragma once

#include "kinlab/cross_section.hpp"
#include "kinlab/physical_params.hpp"
#include "kinlab/vec3.hpp"

namespace kinlab {

/// Which dynamic structure factor of a Maxwell-Boltzmann gas to use.
enum class StructureFactorForm {
    maxwell_boltzmann,  ///< full free-gas form
    brownian,           ///< small mass-ratio limit, still detailed-balanced
};

/// Energy transferred to the test particle: q^2/2M + p.q/M.
double energy_transfer(const TransferVector& q, const MomentumVector& p, const PhysicalParams& params);

/// Same in one dimension.
double energy_transfer_1d(double q, double p, const PhysicalParams& params);

// Structure factors as functions of the transfer modulus |q| > 0 and the
// energy transfer E. All throw DomainError for q_mod <= 0.
double log_structure_factor_mb(double q_mod, double energy, const PhysicalParams& params);
double log_structure_factor_brownian(double q_mod, double energy, const PhysicalParams& params);
double log_structure_factor(StructureFactorForm form, double q_mod, double energy, const PhysicalParams& params);

double structure_factor_mb(double q_mod, double energy, const PhysicalParams& params);
double structure_factor_brownian(double q_mod, double energy, const PhysicalParams& params);
double structure_factor(StructureFactorForm form, double q_mod, double energy, const PhysicalParams& params);

double structure_factor_mb(const TransferVector& q, const MomentumVector& p, const PhysicalParams& params);
double structure_factor_brownian(const TransferVector& q, const MomentumVector& p, const PhysicalParams& params);
double structure_factor(StructureFactorForm form, const TransferVector& q, const MomentumVector& p,
                        const PhysicalParams& params);

/// S(q,E) - exp(-beta E) S(q,-E), evaluated through the log-domain ratio so
/// that extreme exponents do not underflow.
double detailed_balance_residual(double q_mod, double energy, const PhysicalParams& params,
                                 StructureFactorForm which);

/// The residual above divided by S(q,E).
double relative_detailed_balance_residual(double q_mod, double energy, const PhysicalParams& params,
                                          StructureFactorForm which);

/// (|p+q|/|p|) Sigma(|q|) S_MB(q, E(q,p)). Requires |p| > 0 and |q| > 0.
double differential_cross_section(const MomentumVector& p, const TransferVector& q, const PhysicalParams& params,
                                  const CrossSection& xs);

}  // namespace kinlab
