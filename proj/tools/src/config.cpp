#include "kinlab/runner/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>
#include <vector>

namespace kinlab::runner {

using nlohmann::json;

namespace {

constexpr std::pair<Experiment, const char*> experiment_tags[] = {
    {Experiment::coefficients, "coefficients"},
    {Experiment::mc_relax, "mc-relax"},
    {Experiment::kramers, "kramers"},
    {Experiment::quantum_kramers, "quantum-kramers"},
    {Experiment::smoluchowski, "smoluchowski"},
    {Experiment::high_friction_sweep, "high-friction-sweep"},
    {Experiment::gaussian_lindblad, "gaussian-lindblad"},
    {Experiment::nalbe_grid, "nalbe-grid"},
    {Experiment::wigner_spectral, "wigner-spectral"},
};

// Object view that records which keys were read so leftovers can be rejected.
class Block {
public:
    Block(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    bool has(const std::string& key) const { return j_.contains(key); }

    double number(const std::string& key) {
        const auto& v = require(key);
        if (!v.is_number()) throw ConfigError(field(key) + ": expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ConfigError(field(key) + ": must be finite");
        return d;
    }
    double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

    double positive(const std::string& key) {
        const double d = number(key);
        if (!(d > 0.0)) throw ConfigError(field(key) + ": must be > 0");
        return d;
    }
    double positive(const std::string& key, double fallback) { return has(key) ? positive(key) : fallback; }

    std::uint64_t integer(const std::string& key) {
        const auto& v = require(key);
        if (!v.is_number_integer() || (v.is_number_integer() && v.get<long long>() < 0))
            throw ConfigError(field(key) + ": expected a non-negative integer");
        return v.get<std::uint64_t>();
    }
    std::uint64_t integer(const std::string& key, std::uint64_t fallback) { return has(key) ? integer(key) : fallback; }

    std::string string(const std::string& key) {
        const auto& v = require(key);
        if (!v.is_string()) throw ConfigError(field(key) + ": expected a string");
        return v.get<std::string>();
    }
    std::string string(const std::string& key, const std::string& fallback) {
        return has(key) ? string(key) : fallback;
    }

    bool boolean(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const auto& v = require(key);
        if (!v.is_boolean()) throw ConfigError(field(key) + ": expected true or false");
        return v.get<bool>();
    }

    std::vector<double> numbers(const std::string& key) {
        const auto& v = require(key);
        if (!v.is_array()) throw ConfigError(field(key) + ": expected an array of numbers");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) throw ConfigError(field(key) + ": expected an array of numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }

    Block child(const std::string& key) { return Block(require(key), field(key)); }

    template <class E>
    E choice(const std::string& key, std::initializer_list<std::pair<const char*, E>> options, E fallback) {
        if (!has(key)) return fallback;
        const auto s = string(key);
        std::string allowed;
        for (const auto& [name, value] : options) {
            if (s == name) return value;
            allowed += allowed.empty() ? name : std::string(" | ") + name;
        }
        throw ConfigError(field(key) + ": unknown value '" + s + "' (expected " + allowed + ")");
    }

    bool consumed(const std::string& key) const { return used_.contains(key); }

    void finish() const {
        for (const auto& [key, _] : j_.items())
            if (!used_.contains(key)) throw ConfigError(field(key) + ": unknown key");
    }

private:
    const json& require(const std::string& key) {
        if (!j_.contains(key)) throw ConfigError(field(key) + ": required field is missing");
        used_.insert(key);
        return j_.at(key);
    }

    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

// Runs a library validator and reports its message as a config error.
template <class F>
void validated(F&& f, const std::string& prefix = {}) {
    try {
        f();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(prefix.empty() ? std::string(e.what()) : prefix + ": " + e.what());
    }
}

PhysicalParams parse_physics(Block b) {
    PhysicalParams p;
    p.test_mass = b.number("M");
    p.gas_mass = b.number("m");
    p.inv_temperature = b.number("beta");
    p.density = b.number("n");
    p.hbar = b.number("hbar");
    b.finish();
    validated([&] { p.validate(); });
    return p;
}

CrossSection parse_cross_section(Block b) {
    const auto model = b.string("model");
    std::optional<CrossSection> out;
    validated([&] {
        if (model == "constant") {
            out = CrossSection::constant(b.number("sigma0"));
        } else if (model == "gaussian") {
            out = CrossSection::gaussian(b.number("sigma0"), b.number("width"));
        } else if (model == "tabulated") {
            out = CrossSection::tabulated(b.numbers("q"), b.numbers("sigma"));
        } else {
            throw ConfigError(b.field("model") + ": unknown value '" + model +
                              "' (expected constant | gaussian | tabulated)");
        }
    });
    b.finish();
    return *out;
}

PhaseSpaceGrid parse_grid(Block b, const PhysicalParams& pp) {
    PhaseSpaceGrid g;
    g.x_min = b.number("x_min");
    g.x_max = b.number("x_max");
    g.n_x = b.integer("n_x");
    g.p_max = b.number("p_max");
    g.n_p = b.integer("n_p");
    b.finish();
    validated([&] { g.validate(pp); }, "grid");
    return g;
}

PositionGrid parse_position_grid(Block b) {
    PositionGrid g;
    g.x_min = b.number("x_min");
    g.x_max = b.number("x_max");
    g.n_x = b.integer("n_x");
    b.finish();
    validated([&] { g.validate(); }, "position_grid");
    return g;
}

PhaseSpaceInitial parse_initial(Block b) {
    PhaseSpaceInitial i;
    i.x_center = b.number("x_center", 0.0);
    i.x_width = b.positive("x_width", 1.0);
    i.p_shift = b.number("p_shift", 0.0);
    b.finish();
    return i;
}

SolverBlock parse_solver(Block b, bool with_transport) {
    SolverBlock s;
    s.t_end = b.positive("t_end");
    if (b.has("dt")) s.dt = b.positive("dt");
    if (with_transport)
        s.transport = b.choice<fp::TransportScheme>(
            "transport", {{"flux_limited", fp::TransportScheme::flux_limited}, {"upwind", fp::TransportScheme::upwind}},
            fp::TransportScheme::flux_limited);
    s.record_interval = b.number("record_interval", 0.0);
    if (s.record_interval < 0.0) throw ConfigError(b.field("record_interval") + ": must be >= 0");
    b.finish();
    return s;
}

Vec3 parse_vec3(Block& b, const std::string& key) {
    const auto v = b.numbers(key);
    if (v.size() != 3) throw ConfigError(b.field(key) + ": expected three components");
    return {v[0], v[1], v[2]};
}

StructureFactorForm parse_form(Block& b) {
    return b.choice<StructureFactorForm>(
        "form", {{"mb", StructureFactorForm::maxwell_boltzmann}, {"brownian", StructureFactorForm::brownian}},
        StructureFactorForm::maxwell_boltzmann);
}

McBlock parse_mc(Block b) {
    McBlock m;
    auto& e = m.ensemble;
    e.n_trajectories = b.integer("n_trajectories");
    if (e.n_trajectories == 0) throw ConfigError(b.field("n_trajectories") + ": must be >= 1");
    e.t_end = b.positive("t_end");
    e.dt_record = b.positive("dt_record");
    e.seed = b.integer("seed");
    e.threads = static_cast<unsigned>(b.integer("threads", 1));
    e.form = parse_form(b);
    e.keep_final_states = false;
    if (b.has("init")) {
        auto ib = b.child("init");
        e.init.kind = ib.choice<mc::InitialKind>("kind",
                                                 {{"delta", mc::InitialKind::delta},
                                                  {"maxwell", mc::InitialKind::maxwell},
                                                  {"shifted_maxwell", mc::InitialKind::shifted_maxwell}},
                                                 mc::InitialKind::delta);
        if (ib.has("p0")) e.init.p0 = parse_vec3(ib, "p0");
        if (ib.has("x0")) e.init.x0 = parse_vec3(ib, "x0");
        ib.finish();
    }
    m.check_rate = b.boolean("check_rate", norm(e.init.p0) > 0.0);
    m.rate_tolerance = b.positive("rate_tolerance", 0.05);
    m.check_equipartition = b.boolean("check_equipartition", false);
    if (m.check_rate && norm(e.init.p0) == 0.0)
        throw ConfigError(b.field("check_rate") + ": needs a nonzero init.p0 to fit a relaxation rate");
    b.finish();
    return m;
}

SweepBlock parse_sweep(Block b) {
    SweepBlock s;
    s.eta_base = b.positive("eta_base");
    s.factor = b.positive("factor", 2.0);
    if (!(s.factor > 1.0)) throw ConfigError(b.field("factor") + ": must be > 1");
    s.points = b.integer("points", 4);
    if (s.points < 2) throw ConfigError(b.field("points") + ": must be >= 2");
    b.finish();
    return s;
}

GaussianBlock parse_gaussian(Block b, const PhysicalParams& pp) {
    GaussianBlock g;
    g.t_end = b.positive("t_end");
    g.record_interval = b.number("record_interval", 0.0);
    g.position_diffusion_scale = b.number("position_diffusion_scale", 1.0);
    if (g.position_diffusion_scale < 0.0)
        throw ConfigError(b.field("position_diffusion_scale") + ": must be >= 0");
    auto ib = b.child("initial");
    const auto kind = ib.string("kind");
    if (kind == "thermal") {
        g.initial = qm::GaussianState::thermal(pp);
        g.initial.mean_x = ib.number("mean_x", 0.0);
        g.initial.mean_p = ib.number("mean_p", 0.0);
    } else if (kind == "minimum_uncertainty") {
        const double spp = ib.positive("spp");
        if (pp.hbar == 0.0) throw ConfigError(ib.field("kind") + ": minimum_uncertainty needs physics.hbar > 0");
        g.initial = qm::GaussianState::minimum_uncertainty(spp, pp.hbar, ib.number("mean_x", 0.0),
                                                           ib.number("mean_p", 0.0));
    } else if (kind == "general") {
        g.initial = {ib.number("mean_x", 0.0), ib.number("mean_p", 0.0), ib.positive("sxx"), ib.number("sxp", 0.0),
                     ib.positive("spp")};
    } else {
        throw ConfigError(ib.field("kind") + ": unknown value '" + kind +
                          "' (expected thermal | minimum_uncertainty | general)");
    }
    ib.finish();
    b.finish();
    if (!g.initial.satisfies_uncertainty(pp.hbar))
        throw ConfigError(b.field("initial") + ": state violates sxx spp - sxp^2 >= hbar^2/4");
    return g;
}

LatticeBlock parse_lattice(Block b) {
    LatticeBlock l;
    l.n = b.integer("N");
    if (l.n < 2) throw ConfigError(b.field("N") + ": must be >= 2");
    l.p_max = b.positive("p_max");
    l.form = parse_form(b);
    l.t_end = b.positive("t_end");
    l.dt = b.positive("dt");
    l.record_interval = b.number("record_interval", 0.0);
    if (b.has("maxwell_l1_tol")) l.maxwell_l1_tol = b.positive("maxwell_l1_tol");
    auto ib = b.child("initial");
    l.initial = ib.choice<LatticeInitialKind>("kind",
                                              {{"thermal", LatticeInitialKind::thermal},
                                               {"packet", LatticeInitialKind::packet},
                                               {"momentum_eigenstate", LatticeInitialKind::momentum_eigenstate}},
                                              LatticeInitialKind::packet);
    l.p0 = ib.number("p0", 0.0);
    l.width = ib.positive("width", 0.5);
    l.phase = ib.number("phase", 0.0);
    ib.finish();
    b.finish();
    return l;
}

SpectralBlock parse_spectral(Block b) {
    SpectralBlock s;
    s.length = b.positive("length");
    s.modes = b.integer("modes");
    if (s.modes < 1) throw ConfigError(b.field("modes") + ": must be >= 1");
    s.p_max = b.positive("p_max");
    s.n_p = b.integer("n_p");
    if (s.n_p < 8) throw ConfigError(b.field("n_p") + ": must be >= 8");
    s.p_shift = b.number("p_shift", 0.0);
    s.modulation = b.number("modulation", 0.5);
    if (std::abs(s.modulation) >= 1.0) throw ConfigError(b.field("modulation") + ": must satisfy |a| < 1");
    s.t_end = b.positive("t_end");
    s.dt = b.positive("dt");
    s.record_interval = b.number("record_interval", 0.0);
    b.finish();
    return s;
}

}  // namespace

std::string to_string(Experiment e) {
    for (const auto& [value, name] : experiment_tags)
        if (value == e) return name;
    return "unknown";
}

Experiment experiment_from_string(const std::string& tag) {
    for (const auto& [value, name] : experiment_tags)
        if (tag == name) return value;
    std::string allowed;
    for (const auto& [_, name] : experiment_tags) allowed += allowed.empty() ? name : std::string(" | ") + name;
    throw ConfigError("experiment: unknown tag '" + tag + "' (expected " + allowed + ")");
}

json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return json::parse(text, nullptr, true, true);
    } catch (const json::parse_error& e) {
        const auto upto = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
        throw ConfigError(source + ":" + std::to_string(line) + ": JSON syntax error: " + e.what());
    }
}

ScenarioConfig parse_scenario(const json& j) {
    Block root(j, "");
    ScenarioConfig c;
    c.experiment = experiment_from_string(root.string("experiment"));
    c.physics = parse_physics(root.child("physics"));
    c.cross_section = parse_cross_section(root.child("cross_section"));
    if (root.has("eta")) c.eta = root.positive("eta");
    if (root.has("output")) c.output = root.string("output");

    const auto& pp = c.physics;
    switch (c.experiment) {
    case Experiment::coefficients:
        break;
    case Experiment::mc_relax:
        c.mc = parse_mc(root.child("mc"));
        break;
    case Experiment::kramers:
    case Experiment::quantum_kramers:
        c.grid = parse_grid(root.child("grid"), pp);
        c.initial = root.has("initial") ? parse_initial(root.child("initial")) : PhaseSpaceInitial{};
        c.solver = parse_solver(root.child("solver"), true);
        break;
    case Experiment::smoluchowski:
        c.position_grid = parse_position_grid(root.child("position_grid"));
        c.initial = root.has("initial") ? parse_initial(root.child("initial")) : PhaseSpaceInitial{};
        c.solver = parse_solver(root.child("solver"), false);
        if (c.initial->p_shift != 0.0) throw ConfigError("initial.p_shift: not used by smoluchowski");
        break;
    case Experiment::high_friction_sweep:
        c.grid = parse_grid(root.child("grid"), pp);
        c.initial = root.has("initial") ? parse_initial(root.child("initial")) : PhaseSpaceInitial{};
        c.solver = parse_solver(root.child("solver"), true);
        c.sweep = parse_sweep(root.child("sweep"));
        if (c.initial->p_shift != 0.0)
            throw ConfigError("initial.p_shift: the sweep needs an unshifted Maxwellian momentum profile");
        if (c.solver->dt) throw ConfigError("solver.dt: the sweep chooses dt per eta from the stability bound");
        if (c.eta) throw ConfigError("eta: the sweep sets eta through sweep.eta_base");
        break;
    case Experiment::gaussian_lindblad:
        c.gaussian = parse_gaussian(root.child("gaussian"), pp);
        break;
    case Experiment::nalbe_grid:
        c.lattice = parse_lattice(root.child("lattice"));
        if (pp.hbar == 0.0) throw ConfigError("physics.hbar: nalbe-grid needs hbar > 0");
        break;
    case Experiment::wigner_spectral:
        c.spectral = parse_spectral(root.child("spectral"));
        break;
    }
    for (const char* key : {"mc", "grid", "position_grid", "initial", "solver", "sweep", "gaussian", "lattice", "spectral"})
        if (root.has(key) && !root.consumed(key))
            throw ConfigError(std::string(key) + ": block not used by experiment '" + to_string(c.experiment) + "'");
    root.finish();
    return c;
}

}  // namespace kinlab::runner
