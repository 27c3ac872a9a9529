#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "kinlab/physical_params.hpp"

namespace kinlab::qm {

/// First and second moments of a Gaussian state along one Cartesian direction.
struct GaussianState {
    double mean_x = 0.0;
    double mean_p = 0.0;
    double sxx = 1.0;
    double sxp = 0.0;
    double spp = 1.0;

    /// sxx spp - sxp^2
    double uncertainty_det() const noexcept { return sxx * spp - sxp * sxp; }
    /// Robertson-Schroedinger bound det >= hbar^2/4, with relative slack rel_tol.
    bool satisfies_uncertainty(double hbar, double rel_tol = 1e-9) const noexcept;

    /// Minimum-uncertainty state with momentum variance spp and zero correlation.
    static GaussianState minimum_uncertainty(double spp, double hbar, double mean_x = 0.0, double mean_p = 0.0);
    /// Thermal minimum-uncertainty state: spp = M/beta, sxx = beta hbar^2/(4M).
    static GaussianState thermal(const PhysicalParams& params);
};

struct GaussianOptions {
    double record_interval = 0.0;  ///< 0: record only t = 0 and t_end
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    /// Multiplies the position-diffusion coefficient; 0 drops the quantum
    /// correction (not a Lindblad generator any more).
    double position_diffusion_scale = 1.0;
    /// Throw PositivityError on the first recorded uncertainty violation.
    bool enforce_certificate = true;
};

struct GaussianTrajectory {
    std::vector<double> t;
    std::vector<GaussianState> states;
    bool certificate_held = true;
    std::optional<double> first_violation_time;

    const GaussianState& final_state() const { return states.back(); }
};

/// Exact moment equations of the quantum Kramers / Lindblad generator:
///   d<x>/dt = <p>/M,            d<p>/dt = -eta <p>,
///   dsxx/dt = 2 sxp/M + 2 D_xx, dsxp/dt = spp/M - eta sxp,
///   dspp/dt = -2 eta spp + 2 eta M/beta,
/// integrated with adaptive Dormand-Prince. The uncertainty certificate is
/// checked at every accepted step.
GaussianTrajectory gaussian_propagate(const GaussianState& s0, double eta, double t_end, const PhysicalParams& params,
                                      const GaussianOptions& options = {});

/// Right-hand side of the moment equations (exposed for tests).
GaussianState gaussian_moment_rates(const GaussianState& s, double eta, double position_diffusion,
                                    const PhysicalParams& params);

/// Decay rate of the position-basis coherence rho(x, x + dx) due to the
/// double commutator with x alone: (eta / hbar^2) (M/beta) dx^2.
double coherence_decay_rate(double separation, double eta, const PhysicalParams& params);

/// Columns: t, mean_x, mean_p, sxx, sxp, spp, uncertainty_det.
void write_csv(std::ostream& os, const GaussianTrajectory& traj);

}  // namespace kinlab::qm
