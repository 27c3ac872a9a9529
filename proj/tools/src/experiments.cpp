#include "kinlab/runner/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "kinlab/coefficients.hpp"
#include "kinlab/momentum_grid.hpp"
#include "kinlab/wigner_spectral.hpp"

namespace kinlab::runner {

using nlohmann::json;

namespace {

double rel_diff(double a, double b) { return std::abs(a - b) / std::abs(b); }

double eta_for(const ScenarioConfig& c) {
    return c.eta ? *c.eta : friction_coefficient(c.physics, c.cross_section);
}

PhaseSpaceField initial_field(const PhaseSpaceGrid& g, const PhaseSpaceInitial& init, const PhysicalParams& pp) {
    std::vector<double> profile;
    if (init.p_shift == 0.0) {
        profile = discrete_maxwell(g, pp);
    } else {
        for (std::size_t j = 0; j < g.n_p; ++j) {
            const double d = g.p(j) - init.p_shift;
            profile.push_back(std::exp(-pp.inv_temperature * d * d / (2.0 * pp.test_mass)));
        }
    }
    PhaseSpaceField f(g);
    for (std::size_t j = 0; j < g.n_p; ++j)
        for (std::size_t i = 0; i < g.n_x; ++i) {
            const double d = (g.x(i) - init.x_center) / init.x_width;
            f(i, j) = std::exp(-0.5 * d * d) * profile[j];
        }
    f.normalize();
    return f;
}

template <class Moments>
double late_variance_slope(const std::vector<Moments>& m) {
    const double t_from = 0.75 * m.back().t;
    const auto first = std::min_element(m.begin(), m.end() - 1, [t_from](const auto& a, const auto& b) {
        return std::abs(a.t - t_from) < std::abs(b.t - t_from);
    });
    return (m.back().var_x - first->var_x) / (m.back().t - first->t);
}

class Checks {
public:
    void add(const std::string& name, bool ok) {
        j_[name] = ok;
        if (!ok) {
            all_ = false;
            failed_ += failed_.empty() ? name : ", " + name;
        }
    }
    const json& json_value() const { return j_; }
    bool all() const { return all_; }
    const std::string& failed() const { return failed_; }

private:
    json j_ = json::object();
    bool all_ = true;
    std::string failed_;
};

ExperimentResult finish(std::string csv, json summary, const Checks& checks) {
    summary["checks"] = checks.json_value();
    summary["passed"] = checks.all();
    return {std::move(csv), std::move(summary), checks.all(), checks.failed()};
}

std::string csv_line(std::initializer_list<double> values) {
    std::ostringstream os;
    os << std::setprecision(17);
    bool first = true;
    for (double v : values) {
        if (!first) os << ',';
        os << v;
        first = false;
    }
    os << '\n';
    return os.str();
}

ExperimentResult run_coefficients(const ScenarioConfig& c) {
    const auto& pp = c.physics;
    const double eta = eta_for(c);
    json s;
    s["eta"] = eta;
    s["d_xx"] = position_diffusion_coefficient(eta, pp);
    s["mass_ratio"] = pp.mass_ratio();
    s["thermal_momentum_sq"] = pp.thermal_momentum_sq();
    s["thermal_length_sq"] = pp.thermal_length_sq();
    std::string csv = "quantity,value\n";
    auto row = [&](const char* name, double v) {
        std::ostringstream os;
        os << std::setprecision(17) << name << ',' << v << '\n';
        csv += os.str();
    };
    row("eta", eta);
    row("d_xx", s["d_xx"]);
    Checks checks;
    checks.add("eta_nonnegative", eta >= 0.0);
    if (eta > 0.0) {
        const double d_e = einstein_coefficient(eta, pp);
        const double d_s = smoluchowski_coefficient(eta, pp);
        const double factor = smoluchowski_correction_factor(eta, pp);
        s["einstein_coefficient"] = d_e;
        s["smoluchowski_coefficient"] = d_s;
        s["correction_factor"] = factor;
        row("einstein_coefficient", d_e);
        row("smoluchowski_coefficient", d_s);
        row("correction_factor", factor);
        checks.add("correction_factor_identity", rel_diff(d_s / d_e, factor) < 1e-12);
    }
    if (const auto* k = std::get_if<CrossSection::Constant>(&c.cross_section.model()); k && !c.eta) {
        const double m = pp.gas_mass, beta = pp.inv_temperature, a = pp.mass_ratio();
        const double closed = 64.0 * std::numbers::pi / 3.0 * pp.density * k->sigma0 * m * m *
                              std::sqrt(beta * m / (2.0 * std::numbers::pi)) /
                              (std::pow(pp.test_mass, 3) * beta * (1 + 2 * a) * (1 + 2 * a));
        s["eta_closed_form"] = closed;
        row("eta_closed_form", closed);
        if (closed > 0.0) checks.add("eta_matches_closed_form", rel_diff(eta, closed) < 1e-8);
    }
    return finish(std::move(csv), std::move(s), checks);
}

ExperimentResult run_mc(const ScenarioConfig& c, const RunOptions& opt) {
    const auto& pp = c.physics;
    auto cfg = c.mc->ensemble;
    if (opt.seed) cfg.seed = *opt.seed;
    if (opt.threads) cfg.threads = *opt.threads;
    const auto res = mc::evolve_ensemble(cfg, pp, c.cross_section);
    std::ostringstream csv;
    mc::write_csv(csv, res.stats);

    const double eta = eta_for(c);
    json s;
    s["eta"] = eta;
    s["seed"] = cfg.seed;
    s["threads"] = cfg.threads;
    s["n_trajectories"] = cfg.n_trajectories;
    s["collisions"] = res.collisions;
    s["acceptance_rate"] = res.sampler.acceptance_rate();
    s["warnings"] = res.warnings;
    s["final_mean_p2"] = res.stats.mean_p2.back();
    s["final_se_p2"] = res.stats.se_p2.back();
    s["equipartition_target"] = 3.0 * pp.test_mass / pp.inv_temperature;

    Checks checks;
    const auto& p0 = cfg.init.p0;
    if (norm(p0) > 0.0) {
        const int axis = std::abs(p0.x) >= std::abs(p0.y) && std::abs(p0.x) >= std::abs(p0.z)
                             ? 0
                             : (std::abs(p0.y) >= std::abs(p0.z) ? 1 : 2);
        const double sign = p0[axis] < 0.0 ? -1.0 : 1.0;
        std::vector<double> y, se;
        for (std::size_t k = 0; k < res.stats.t.size(); ++k) {
            y.push_back(sign * res.stats.mean_p[k][axis]);
            se.push_back(res.stats.se_p[k][axis]);
        }
        const auto fit = mc::fit_exponential_decay(res.stats.t, y, se);
        s["fit_axis"] = std::string(1, "xyz"[axis]);
        s["fitted_rate"] = fit.rate;
        s["fitted_rate_se"] = fit.rate_se;
        s["rate_tolerance"] = c.mc->rate_tolerance;
        s["fit_points"] = fit.points_used;
        s["rate_rel_diff"] = rel_diff(fit.rate, eta);
        if (c.mc->check_rate) checks.add("relaxation_rate", rel_diff(fit.rate, eta) < c.mc->rate_tolerance);
    }
    if (c.mc->check_equipartition)
        checks.add("equipartition", std::abs(res.stats.mean_p2.back() - s["equipartition_target"].get<double>()) <
                                        3.0 * res.stats.se_p2.back());
    checks.add("sampler_acceptance", res.warnings.empty());
    return finish(csv.str(), std::move(s), checks);
}

ExperimentResult run_kramers(const ScenarioConfig& c, bool quantum) {
    const auto& pp = c.physics;
    const auto& sol = *c.solver;
    const double eta = eta_for(c);
    const double d_xx = quantum ? position_diffusion_coefficient(eta, pp) : 0.0;
    const auto f0 = initial_field(*c.grid, *c.initial, pp);
    const double dt = sol.dt ? *sol.dt : 0.9 * fp::kramers_stable_dt(*c.grid, eta, d_xx, pp);
    const fp::SolverOptions opts{sol.transport, sol.record_interval};
    const auto res = quantum ? fp::quantum_kramers_solve(f0, eta, sol.t_end, dt, pp, opts)
                             : fp::kramers_solve(f0, eta, sol.t_end, dt, pp, opts);
    std::ostringstream csv;
    write_moments_csv(csv, res.moments);

    json s;
    s["eta"] = eta;
    s["d_xx"] = d_xx;
    s["dt"] = res.dt;
    s["steps"] = res.steps;
    s["final_norm"] = res.moments.back().norm;
    s["min_value"] = res.field.min_value();
    s["late_msd_slope"] = late_variance_slope(res.moments);
    s["asymptotic_msd_slope"] = 2.0 * (einstein_coefficient(eta, pp) + d_xx);

    Checks checks;
    double drift = 0.0;
    for (const auto& m : res.moments) drift = std::max(drift, std::abs(m.norm - 1.0));
    s["max_norm_drift"] = drift;
    checks.add("normalization", drift < 1e-8 * std::max(1.0, sol.t_end));
    if (!quantum) checks.add("nonnegativity", res.field.min_value() >= 0.0);

    if (quantum) {
        const auto classical = fp::kramers_solve(f0, eta, sol.t_end, res.dt, pp, opts);
        const double late_c = late_variance_slope(classical.moments);
        s["classical_late_msd_slope"] = late_c;
        s["correction_factor"] = smoluchowski_correction_factor(eta, pp);
        s["measured_ratio"] = s["late_msd_slope"].get<double>() / late_c;
        if (d_xx > 0.0) {
            const auto& q = res.moments;
            const auto& k = classical.moments;
            const double excess =
                ((q.back().var_x - q.front().var_x) - (k.back().var_x - k.front().var_x)) / (q.back().t - q.front().t);
            s["excess_msd_slope"] = excess;
            s["excess_rel_err"] = rel_diff(excess, 2.0 * d_xx);
            checks.add("excess_msd_slope", rel_diff(excess, 2.0 * d_xx) < 0.01);
        } else {
            checks.add("classical_limit_bitwise", classical.field.values() == res.field.values());
        }
    }
    return finish(csv.str(), std::move(s), checks);
}

ExperimentResult run_smoluchowski(const ScenarioConfig& c) {
    const auto& pp = c.physics;
    const auto& sol = *c.solver;
    const auto& init = *c.initial;
    const double eta = eta_for(c);
    auto sigma = PositionField::from_function(*c.position_grid, [&](double x) {
        const double d = (x - init.x_center) / init.x_width;
        return std::exp(-0.5 * d * d);
    });
    sigma.normalize();
    const double coeff = smoluchowski_coefficient(eta, pp);
    const double dt = sol.dt ? *sol.dt : 0.9 * fp::smoluchowski_stable_dt(*c.position_grid, coeff);
    const auto res = fp::smoluchowski_solve(sigma, eta, sol.t_end, dt, pp, sol.record_interval);

    std::string csv = "t,mean_x,var_x,norm\n";
    for (const auto& m : res.moments) csv += csv_line({m.t, m.mean_x, m.var_x, m.norm});

    const auto& m0 = res.moments.front();
    const auto& m1 = res.moments.back();
    const double slope = (m1.var_x - m0.var_x) / (m1.t - m0.t);
    json s;
    s["eta"] = eta;
    s["coefficient"] = res.coefficient;
    s["einstein_coefficient"] = einstein_coefficient(eta, pp);
    s["d_xx"] = position_diffusion_coefficient(eta, pp);
    s["coefficient_ratio"] = res.coefficient / einstein_coefficient(eta, pp);
    s["correction_factor"] = smoluchowski_correction_factor(eta, pp);
    s["dt"] = res.dt;
    s["steps"] = res.steps;
    s["variance_slope"] = slope;
    s["expected_variance_slope"] = 2.0 * res.coefficient;
    s["variance_slope_rel_err"] = rel_diff(slope, 2.0 * res.coefficient);

    Checks checks;
    checks.add("heat_kernel_variance", rel_diff(slope, 2.0 * res.coefficient) < 5e-3);
    checks.add("normalization", std::abs(m1.norm - 1.0) < 1e-10);
    checks.add("nonnegativity",
               *std::min_element(res.field.values().begin(), res.field.values().end()) >= 0.0);
    checks.add("coefficient_ratio_identity",
               rel_diff(s["coefficient_ratio"].get<double>(), s["correction_factor"].get<double>()) < 1e-12);
    return finish(std::move(csv), std::move(s), checks);
}

ExperimentResult run_sweep(const ScenarioConfig& c) {
    const auto& pp = c.physics;
    const auto f0 = initial_field(*c.grid, *c.initial, pp);
    const auto& sw = *c.sweep;
    const auto rep = fp::high_friction_compare(f0, sw.eta_base, c.solver->t_end, pp, sw.points, sw.factor,
                                               {c.solver->transport, 0.0});
    std::string csv = "eta,deviation,kramers_dt,smoluchowski_dt\n";
    json points = json::array();
    for (const auto& p : rep.points) {
        csv += csv_line({p.eta, p.deviation, p.kramers_dt, p.smoluchowski_dt});
        points.push_back({{"eta", p.eta}, {"deviation", p.deviation}});
    }
    json s;
    s["points"] = points;
    s["monotone_decreasing"] = rep.monotone_decreasing;
    s["loglog_slope"] = rep.loglog_slope;
    Checks checks;
    checks.add("monotone_decreasing", rep.monotone_decreasing);
    checks.add("loglog_slope_in_range", rep.loglog_slope >= -2.0 && rep.loglog_slope <= -0.7);
    return finish(std::move(csv), std::move(s), checks);
}

ExperimentResult run_gaussian(const ScenarioConfig& c) {
    const auto& pp = c.physics;
    const auto& g = *c.gaussian;
    const double eta = eta_for(c);
    qm::GaussianOptions opts;
    opts.record_interval = g.record_interval;
    opts.position_diffusion_scale = g.position_diffusion_scale;
    opts.enforce_certificate = g.position_diffusion_scale == 1.0;
    const auto traj = qm::gaussian_propagate(g.initial, eta, g.t_end, pp, opts);
    std::ostringstream csv;
    qm::write_csv(csv, traj);

    const double d_xx = g.position_diffusion_scale * position_diffusion_coefficient(eta, pp);
    const auto& fin = traj.final_state();
    const double slope = qm::gaussian_moment_rates(fin, eta, d_xx, pp).sxx;
    const double expected = 2.0 * (einstein_coefficient(eta, pp) + d_xx);
    json s;
    s["eta"] = eta;
    s["d_xx"] = d_xx;
    s["final"] = {{"mean_x", fin.mean_x}, {"mean_p", fin.mean_p}, {"sxx", fin.sxx}, {"sxp", fin.sxp}, {"spp", fin.spp}};
    s["long_time_msd_slope"] = slope;
    s["expected_msd_slope"] = expected;
    s["msd_slope_rel_err"] = rel_diff(slope, expected);
    s["certificate_held"] = traj.certificate_held;
    s["first_violation_time"] = traj.first_violation_time ? json(*traj.first_violation_time) : json(nullptr);

    Checks checks;
    if (g.position_diffusion_scale == 1.0) checks.add("uncertainty_certificate", traj.certificate_held);
    if (eta * g.t_end >= 20.0) checks.add("long_time_msd_slope", rel_diff(slope, expected) < 1e-3);
    return finish(csv.str(), std::move(s), checks);
}

ExperimentResult run_nalbe(const ScenarioConfig& c) {
    const auto& pp = c.physics;
    const auto& l = *c.lattice;
    const qm::MomentumLattice lat{l.n, 2.0 * l.p_max / static_cast<double>(l.n)};
    qm::MomentumGridDensityMatrix rho0;
    switch (l.initial) {
    case LatticeInitialKind::thermal:
        rho0 = qm::MomentumGridDensityMatrix::thermal(lat, pp);
        break;
    case LatticeInitialKind::packet: {
        std::vector<std::complex<double>> psi(lat.n);
        for (std::size_t i = 0; i < lat.n; ++i) {
            const double d = lat.p(i) - l.p0;
            psi[i] = std::exp(-d * d / (4.0 * l.width * l.width)) * std::polar(1.0, l.phase * lat.p(i));
        }
        rho0 = qm::MomentumGridDensityMatrix::from_wavefunction(lat, psi);
        break;
    }
    case LatticeInitialKind::momentum_eigenstate: {
        std::vector<double> d(lat.n, 0.0);
        std::size_t best = 0;
        for (std::size_t i = 1; i < lat.n; ++i)
            if (std::abs(lat.p(i) - l.p0) < std::abs(lat.p(best) - l.p0)) best = i;
        d[best] = 1.0 / lat.dp;
        rho0 = qm::MomentumGridDensityMatrix::from_diagonal(lat, d);
        break;
    }
    }
    qm::GridEvolveOptions opts;
    opts.form = l.form;
    opts.record_interval = l.record_interval;
    const auto res = qm::nonabelian_grid_evolve(rho0, l.t_end, l.dt, pp, c.cross_section, opts);
    std::ostringstream csv;
    qm::write_csv(csv, res.diagnostics);

    double trace_drift = 0.0, min_eig = std::numeric_limits<double>::infinity();
    for (const auto& d : res.diagnostics) {
        trace_drift = std::max(trace_drift, std::abs(d.trace - 1.0));
        min_eig = std::min(min_eig, d.min_eig);
    }
    const auto& last = res.diagnostics.back();
    json s;
    s["eta"] = eta_for(c);
    s["N"] = l.n;
    s["dp"] = lat.dp;
    s["dt"] = res.dt;
    s["steps"] = res.steps;
    s["max_trace_drift"] = trace_drift;
    s["min_eigenvalue"] = min_eig;
    s["hermiticity_error"] = res.state.hermiticity_error();
    s["final_diag_l1_to_maxwell"] = last.diag_l1_dist_to_maxwell;
    s["final_offdiag_l2"] = last.offdiag_l2;

    Checks checks;
    checks.add("trace", trace_drift < 1e-8 * std::max(1.0, l.t_end));
    checks.add("hermiticity", res.state.hermiticity_error() < 1e-12);
    checks.add("positivity", min_eig >= -1e-6);
    if (l.maxwell_l1_tol) checks.add("relaxed_to_maxwell", last.diag_l1_dist_to_maxwell < *l.maxwell_l1_tol);
    return finish(csv.str(), std::move(s), checks);
}

ExperimentResult run_spectral(const ScenarioConfig& c) {
    const auto& pp = c.physics;
    const auto& sp = *c.spectral;
    qm::WignerSpectralField w0(sp.length, sp.modes, sp.p_max, sp.n_p);
    double norm = 0.0;
    std::vector<double> g(sp.n_p);
    for (std::size_t j = 0; j < sp.n_p; ++j) {
        const double d = w0.p(j) - sp.p_shift;
        g[j] = std::exp(-pp.inv_temperature * d * d / (2.0 * pp.test_mass));
        norm += g[j] * w0.dp();
    }
    for (std::size_t j = 0; j < sp.n_p; ++j) {
        const double base = g[j] / (norm * sp.length);
        w0(0, j) = base;
        w0(1, j) = 0.5 * sp.modulation * base;
        w0(-1, j) = 0.5 * sp.modulation * base;
    }
    const qm::WignerBoltzmannOperator quantum(w0, pp, c.cross_section, qm::KernelMode::quantum);
    const qm::WignerBoltzmannOperator classical(w0, pp, c.cross_section, qm::KernelMode::classical);
    const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(sp.t_end / sp.dt * (1.0 - 1e-12))));
    const double h = sp.t_end / static_cast<double>(steps);
    const std::size_t stride =
        sp.record_interval > 0.0
            ? std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(sp.record_interval / h)))
            : steps;

    auto wq = w0, wc = w0;
    std::string csv = "t,max_quantum_classical_diff,k0_max_diff,reality_error,mass\n";
    double worst_reality = 0.0, worst_k0 = 0.0, worst_mass = 0.0;
    auto record = [&](double t) {
        double k0 = 0.0, mass = 0.0;
        for (std::size_t j = 0; j < sp.n_p; ++j) {
            k0 = std::max(k0, std::abs(wq(0, j) - wc(0, j)));
            mass += wq(0, j).real() * wq.dp() * sp.length;
        }
        const double reality = std::max(wq.reality_error(), wc.reality_error());
        worst_reality = std::max(worst_reality, reality);
        worst_k0 = std::max(worst_k0, k0);
        worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
        csv += csv_line({t, wq.max_difference(wc), k0, reality, mass});
    };
    record(0.0);
    for (std::size_t n = 1; n <= steps; ++n) {
        quantum.step(wq, h);
        classical.step(wc, h);
        if (n % stride == 0 || n == steps) record(static_cast<double>(n) * h);
    }
    json s;
    s["dt"] = h;
    s["steps"] = steps;
    s["stable_dt"] = std::min(quantum.stable_dt(), classical.stable_dt());
    s["final_max_quantum_classical_diff"] = wq.max_difference(wc);
    s["max_reality_error"] = worst_reality;
    s["max_k0_diff"] = worst_k0;
    s["max_mass_drift"] = worst_mass;
    Checks checks;
    checks.add("homogeneous_sector_identical", worst_k0 == 0.0);
    checks.add("reality", worst_reality < 1e-12);
    checks.add("mass", worst_mass < 1e-10);
    return finish(std::move(csv), std::move(s), checks);
}

}  // namespace

ExperimentResult run_experiment(const ScenarioConfig& c, const RunOptions& options) {
    ExperimentResult r;
    switch (c.experiment) {
    case Experiment::coefficients:
        r = run_coefficients(c);
        break;
    case Experiment::mc_relax:
        r = run_mc(c, options);
        break;
    case Experiment::kramers:
        r = run_kramers(c, false);
        break;
    case Experiment::quantum_kramers:
        r = run_kramers(c, true);
        break;
    case Experiment::smoluchowski:
        r = run_smoluchowski(c);
        break;
    case Experiment::high_friction_sweep:
        r = run_sweep(c);
        break;
    case Experiment::gaussian_lindblad:
        r = run_gaussian(c);
        break;
    case Experiment::nalbe_grid:
        r = run_nalbe(c);
        break;
    case Experiment::wigner_spectral:
        r = run_spectral(c);
        break;
    }
    r.summary["experiment"] = to_string(c.experiment);
    return r;
}

}  // namespace kinlab::runner
