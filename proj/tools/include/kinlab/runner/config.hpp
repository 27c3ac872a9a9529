#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "kinlab/collision_mc.hpp"
#include "kinlab/cross_section.hpp"
#include "kinlab/fokker_planck.hpp"
#include "kinlab/gaussian_lindblad.hpp"
#include "kinlab/phase_space.hpp"
#include "kinlab/physical_params.hpp"
#include "kinlab/structure_factor.hpp"

namespace kinlab::runner {

/// Invalid scenario or report specification. The message starts with the
/// offending field path (or line number for syntax errors).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Experiment {
    coefficients,
    mc_relax,
    kramers,
    quantum_kramers,
    smoluchowski,
    high_friction_sweep,
    gaussian_lindblad,
    nalbe_grid,
    wigner_spectral,
};

std::string to_string(Experiment e);
Experiment experiment_from_string(const std::string& tag);

/// Gaussian in x times a (possibly shifted) Maxwellian in p.
struct PhaseSpaceInitial {
    double x_center = 0.0;
    double x_width = 1.0;
    double p_shift = 0.0;
};

struct SolverBlock {
    double t_end = 1.0;
    std::optional<double> dt;  ///< default: 0.9 of the stability bound
    fp::TransportScheme transport = fp::TransportScheme::flux_limited;
    double record_interval = 0.0;
};

struct McBlock {
    mc::EnsembleConfig ensemble;
    bool check_rate = true;
    double rate_tolerance = 0.05;
    bool check_equipartition = false;
};

struct SweepBlock {
    double eta_base = 0.5;
    double factor = 2.0;
    std::size_t points = 4;
};

struct GaussianBlock {
    qm::GaussianState initial;
    double t_end = 1.0;
    double record_interval = 0.0;
    double position_diffusion_scale = 1.0;
};

enum class LatticeInitialKind { thermal, packet, momentum_eigenstate };

struct LatticeBlock {
    std::size_t n = 32;
    double p_max = 6.0;
    StructureFactorForm form = StructureFactorForm::maxwell_boltzmann;
    LatticeInitialKind initial = LatticeInitialKind::packet;
    double p0 = 0.0;
    double width = 0.5;
    double phase = 0.0;
    double t_end = 1.0;
    double dt = 0.1;
    double record_interval = 0.0;
    std::optional<double> maxwell_l1_tol;
};

struct SpectralBlock {
    double length = 10.0;
    std::size_t modes = 4;
    double p_max = 6.0;
    std::size_t n_p = 48;
    double p_shift = 0.0;
    double modulation = 0.5;
    double t_end = 1.0;
    double dt = 0.05;
    double record_interval = 0.0;
};

struct ScenarioConfig {
    Experiment experiment = Experiment::coefficients;
    PhysicalParams physics;
    CrossSection cross_section = CrossSection::constant(1.0);
    std::optional<double> eta;  ///< overrides the quadrature friction coefficient
    std::optional<std::string> output;

    std::optional<McBlock> mc;
    std::optional<PhaseSpaceGrid> grid;
    std::optional<PositionGrid> position_grid;
    std::optional<PhaseSpaceInitial> initial;
    std::optional<SolverBlock> solver;
    std::optional<SweepBlock> sweep;
    std::optional<GaussianBlock> gaussian;
    std::optional<LatticeBlock> lattice;
    std::optional<SpectralBlock> spectral;
};

/// Parses JSON text (comments allowed); syntax errors report the line.
nlohmann::json parse_json_text(const std::string& text, const std::string& source);

/// Validates and converts a scenario. Unknown keys and blocks not used by the
/// chosen experiment are rejected.
ScenarioConfig parse_scenario(const nlohmann::json& j);

}  // namespace kinlab::runner
