#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "kinlab/cross_section.hpp"
#include "kinlab/physical_params.hpp"
#include "kinlab/structure_factor.hpp"
#include "kinlab/vec3.hpp"

namespace kinlab::mc {

using Rng = std::mt19937_64;

/// Independent random stream for trajectory `index` of a run seeded with `seed`.
Rng make_stream(std::uint64_t seed, std::uint64_t index);

/// Radial cutoff beyond which the collision kernel at |p| = p_mod carries
/// less than exp(-100) of its peak weight.
double transfer_extent(double p_mod, const PhysicalParams& params, StructureFactorForm form);

/// Loss rate R(p) = (n/M^2) Int d^3q Sigma(q) S(q,p), by nested adaptive
/// quadrature over (|q|, cos theta) about p.
double total_rate(const MomentumVector& p, const PhysicalParams& params, const CrossSection& xs,
                  StructureFactorForm form = StructureFactorForm::maxwell_boltzmann, double rel_tol = 1e-8);

struct SamplerStats {
    std::uint64_t proposals = 0;
    std::uint64_t acceptances = 0;

    double acceptance_rate() const noexcept {
        return proposals == 0 ? 1.0 : static_cast<double>(acceptances) / static_cast<double>(proposals);
    }
    SamplerStats& operator+=(const SamplerStats& o) noexcept {
        proposals += o.proposals;
        acceptances += o.acceptances;
        return *this;
    }
};

/// Acceptance rates below this are reported as a diagnostic warning.
inline constexpr double low_acceptance_threshold = 1e-3;

/// Draws momentum transfers from the gain kernel Sigma(q) S(q,p) by
/// thinning: candidate events arrive at a majorant rate G(|p|) >= R(p) with
/// transfers drawn from a piecewise-constant radial envelope and isotropic
/// direction, and are accepted with probability Sigma S / envelope.
class TransferSampler {
public:
    /// Tables are precomputed for |p| < p_cap; larger momenta fall back to a
    /// table built on the spot.
    TransferSampler(PhysicalParams params, CrossSection xs, StructureFactorForm form, double p_cap,
                    std::size_t table_cells = 10000);

    struct Proposal {
        TransferVector q;
        bool accepted = false;
    };

    double majorant_rate(const MomentumVector& p) const;
    Proposal propose(const MomentumVector& p, Rng& rng, SamplerStats& stats) const;

    /// A transfer distributed with density Sigma(q) S(q,p) / R(p). Requires R(p) > 0.
    TransferVector sample_transfer(const MomentumVector& p, Rng& rng, SamplerStats& stats) const;

    /// Time to the next accepted collision at fixed p; distributed as Exp(R(p)).
    double sample_waiting_time(const MomentumVector& p, Rng& rng, SamplerStats& stats) const;

    const PhysicalParams& params() const noexcept { return params_; }
    StructureFactorForm form() const noexcept { return form_; }

private:
    struct RadialTable {
        double p_bound = 0.0;
        double cell = 0.0;
        std::vector<double> cumulative;  // size cells + 1
        std::vector<double> height;      // majorant of q Sigma(q) exp(exponent) per cell
        double rate = 0.0;               // majorant event rate
    };

    RadialTable build_table(double p_bound) const;
    const RadialTable& table_for(double p_mod, RadialTable& scratch) const;
    double log_kernel(double q_mod, double p_along_q) const;
    double log_envelope(double q_mod, double p_bound) const;
    double envelope_peak(double p_bound) const;

    PhysicalParams params_;
    CrossSection xs_;
    StructureFactorForm form_;
    std::size_t cells_;
    double bin_width_;
    double rate_prefactor_;
    std::vector<RadialTable> tables_;
};

struct TrajectoryState {
    Vec3 x;
    MomentumVector p;
    double t = 0.0;
};

enum class InitialKind { delta, maxwell, shifted_maxwell };

struct InitialDistribution {
    InitialKind kind = InitialKind::delta;
    MomentumVector p0{};
    Vec3 x0{};
};

struct EnsembleConfig {
    std::size_t n_trajectories = 1000;
    double t_end = 1.0;
    double dt_record = 0.1;
    InitialDistribution init{};
    std::uint64_t seed = 1;
    unsigned threads = 1;
    StructureFactorForm form = StructureFactorForm::maxwell_boltzmann;
    bool keep_final_states = true;
};

/// Ensemble observables on the recording grid t_k = k dt_record.
struct EnsembleStats {
    std::vector<double> t;
    std::vector<Vec3> mean_p;
    std::vector<double> mean_p2;
    std::vector<Vec3> mean_x;
    std::vector<double> mean_x2;
    std::vector<Vec3> se_p;
    std::vector<double> se_p2;
    std::vector<double> se_x2;
    std::size_t n_samples = 0;
};

struct EnsembleResult {
    EnsembleStats stats;
    std::vector<TrajectoryState> final_states;
    SamplerStats sampler;
    std::uint64_t collisions = 0;
    std::vector<std::string> warnings;
};

/// Jump-process simulation of the classical linear Boltzmann equation:
/// ballistic flight x += p/M dt between collisions p -> p + q.
/// Results depend only on (config, params, xs), not on the thread count.
EnsembleResult evolve_ensemble(const EnsembleConfig& config, const PhysicalParams& params, const CrossSection& xs);

/// Columns: t, mean_px, mean_py, mean_pz, mean_p2, mean_x2, se_p2, n_samples.
void write_csv(std::ostream& os, const EnsembleStats& stats);

struct RateFit {
    double rate = 0.0;
    double rate_se = 0.0;
    double amplitude = 0.0;
    std::size_t points_used = 0;
};

/// Weighted least-squares fit of y = A exp(-k t) on log(y), using points with
/// y > min_snr * se.
RateFit fit_exponential_decay(std::span<const double> t, std::span<const double> y, std::span<const double> se,
                              double min_snr = 3.0);

}  // namespace kinlab::mc
