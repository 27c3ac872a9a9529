#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kinlab/phase_space.hpp"
#include "kinlab/physical_params.hpp"

namespace kinlab::fp {

enum class TransportScheme {
    upwind,        ///< first order, monotone
    flux_limited,  ///< van Leer limited second order (TVD for CFL <= 1)
};

struct SolverOptions {
    TransportScheme transport = TransportScheme::flux_limited;
    /// Moments are recorded at t = 0, roughly every record_interval, and at
    /// t_end. Zero records only the end points.
    double record_interval = 0.0;
};

struct KramersResult {
    PhaseSpaceField field;
    std::vector<PhaseSpaceMoments> moments;
    std::size_t steps = 0;
    double dt = 0.0;  ///< step actually used (t_end / steps)
};

/// Largest dt accepted by the Kramers solvers:
/// 0.4 min(dx / (p_max/M), dp^2 beta / (2 eta M), dx^2 / (2 D_xx)), further
/// capped so that the explicit momentum update keeps nonnegative weights.
double kramers_stable_dt(const PhaseSpaceGrid& grid, double eta, double position_diffusion,
                         const PhysicalParams& params);

/// Classical Kramers equation
///   df/dt = -(p/M) df/dx + eta [d/dp (p f) + (M/beta) d^2f/dp^2]
/// with Strang splitting between free transport and the momentum
/// Fokker-Planck operator. The momentum flux is exponentially fitted
/// (Scharfetter-Gummel), so the discrete Maxwellian is an exact equilibrium.
/// Throws StabilityError when dt exceeds kramers_stable_dt.
KramersResult kramers_solve(const PhaseSpaceField& f0, double eta, double t_end, double dt,
                            const PhysicalParams& params, const SolverOptions& options = {});

/// Kramers equation plus the quantum position diffusion D_xx d^2f/dx^2 with
/// D_xx = eta beta hbar^2 / (16 M). The Wigner function may go negative; only
/// normalisation is conserved. With hbar = 0 the stepping is identical to
/// kramers_solve.
KramersResult quantum_kramers_solve(const PhaseSpaceField& f0, double eta, double t_end, double dt,
                                    const PhysicalParams& params, const SolverOptions& options = {});

struct SmoluchowskiResult {
    PositionField field;
    std::vector<PositionMoments> moments;
    std::size_t steps = 0;
    double dt = 0.0;
    double coefficient = 0.0;
};

/// 0.4 dx^2 / (2 D).
double smoluchowski_stable_dt(const PositionGrid& grid, double coefficient);

/// Heat equation d sigma/dt = (1/(eta M beta) + D_xx) d^2 sigma/dx^2 on a
/// periodic grid, explicit central differences.
SmoluchowskiResult smoluchowski_solve(const PositionField& sigma0, double eta, double t_end, double dt,
                                      const PhysicalParams& params, double record_interval = 0.0);

struct HighFrictionPoint {
    double eta = 0.0;
    double deviation = 0.0;  ///< L1 distance of x-marginals at t_end
    double kramers_dt = 0.0;
    double smoluchowski_dt = 0.0;
};

struct HighFrictionReport {
    std::vector<HighFrictionPoint> points;
    bool monotone_decreasing = false;
    double loglog_slope = 0.0;  ///< least-squares slope of log deviation vs log eta
};

/// For every eta: run quantum_kramers_solve from f0, take its x-marginal,
/// run smoluchowski_solve from the x-marginal of f0, and report the L1
/// deviation at t_end. f0 must be a product of a position profile and the
/// discrete Maxwellian. Steps are dt_safety times the stable bounds.
HighFrictionReport high_friction_compare(const PhaseSpaceField& f0, std::span<const double> etas, double t_end,
                                         const PhysicalParams& params, const SolverOptions& options = {},
                                         double dt_safety = 0.9);

/// Geometric sweep eta_base * factor^k, k = 0..n_points-1.
HighFrictionReport high_friction_compare(const PhaseSpaceField& f0, double eta_base, double t_end,
                                         const PhysicalParams& params, std::size_t n_points = 4, double factor = 2.0,
                                         const SolverOptions& options = {});

}  // namespace kinlab::fp
