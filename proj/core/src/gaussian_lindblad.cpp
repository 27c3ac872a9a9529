#include "kinlab/gaussian_lindblad.hpp"

#include <array>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "kinlab/coefficients.hpp"
#include "kinlab/errors.hpp"

namespace kinlab::qm {

namespace {

using State = std::array<double, 5>;

State pack(const GaussianState& s) { return {s.mean_x, s.mean_p, s.sxx, s.sxp, s.spp}; }
GaussianState unpack(const State& y) { return {y[0], y[1], y[2], y[3], y[4]}; }

}  // namespace

bool GaussianState::satisfies_uncertainty(double hbar, double rel_tol) const noexcept {
    const double bound = 0.25 * hbar * hbar;
    return uncertainty_det() >= bound * (1.0 - rel_tol);
}

GaussianState GaussianState::minimum_uncertainty(double spp, double hbar, double mean_x, double mean_p) {
    if (!(spp > 0.0)) throw std::invalid_argument("minimum-uncertainty state needs spp > 0");
    return {mean_x, mean_p, 0.25 * hbar * hbar / spp, 0.0, spp};
}

GaussianState GaussianState::thermal(const PhysicalParams& params) {
    return {0.0, 0.0, params.thermal_length_sq(), 0.0, params.thermal_momentum_sq()};
}

GaussianState gaussian_moment_rates(const GaussianState& s, double eta, double d_xx, const PhysicalParams& pp) {
    const double M = pp.test_mass;
    GaussianState r;
    r.mean_x = s.mean_p / M;
    r.mean_p = -eta * s.mean_p;
    r.sxx = 2.0 * s.sxp / M + 2.0 * d_xx;
    r.sxp = s.spp / M - eta * s.sxp;
    r.spp = -2.0 * eta * s.spp + 2.0 * eta * pp.thermal_momentum_sq();
    return r;
}

GaussianTrajectory gaussian_propagate(const GaussianState& s0, double eta, double t_end, const PhysicalParams& pp,
                                      const GaussianOptions& options) {
    namespace odeint = boost::numeric::odeint;
    pp.validate();
    if (!(eta >= 0.0)) throw std::invalid_argument("gaussian_propagate needs eta >= 0");
    if (!(t_end >= 0.0)) throw std::invalid_argument("gaussian_propagate needs t_end >= 0");
    if (!(s0.sxx > 0.0) || !(s0.spp > 0.0)) throw std::invalid_argument("Gaussian state needs sxx, spp > 0");
    if (!s0.satisfies_uncertainty(pp.hbar))
        throw std::invalid_argument("initial Gaussian state violates the uncertainty relation");

    const double d_xx = options.position_diffusion_scale * position_diffusion_coefficient(eta, pp);
    GaussianTrajectory out;

    auto check = [&](const GaussianState& s, double t) {
        if (s.satisfies_uncertainty(pp.hbar)) return;
        if (!out.first_violation_time) out.first_violation_time = t;
        out.certificate_held = false;
        if (options.enforce_certificate)
            throw PositivityError("uncertainty certificate violated at t = " + std::to_string(t));
    };

    const auto rhs = [&](const State& y, State& dydt, double) { dydt = pack(gaussian_moment_rates(unpack(y), eta, d_xx, pp)); };

    std::vector<double> times{0.0};
    if (t_end > 0.0) {
        if (options.record_interval > 0.0) {
            const auto n = static_cast<std::size_t>(std::ceil(t_end / options.record_interval * (1.0 - 1e-12)));
            for (std::size_t k = 1; k < n; ++k) times.push_back(static_cast<double>(k) * options.record_interval);
        }
        times.push_back(t_end);
    }

    State y = pack(s0);
    out.t.push_back(0.0);
    out.states.push_back(s0);
    if (times.size() == 1) return out;

    auto stepper = odeint::make_dense_output(options.abs_tol, options.rel_tol, odeint::runge_kutta_dopri5<State>());
    // Every internal step is checked, not only the recorded ones.
    std::size_t next = 1;
    stepper.initialize(y, 0.0, std::min(1e-3 / std::max(eta, 1e-12), t_end / 16.0));
    while (next < times.size()) {
        stepper.do_step(rhs);
        check(unpack(stepper.current_state()), stepper.current_time());
        while (next < times.size() && times[next] <= stepper.current_time()) {
            State yi;
            stepper.calc_state(times[next], yi);
            const GaussianState s = unpack(yi);
            check(s, times[next]);
            out.t.push_back(times[next]);
            out.states.push_back(s);
            ++next;
        }
    }
    return out;
}

double coherence_decay_rate(double separation, double eta, const PhysicalParams& pp) {
    if (pp.hbar == 0.0) throw DomainError("coherence decay rate is a quantum quantity; hbar must be > 0");
    if (!(eta >= 0.0)) throw std::invalid_argument("coherence_decay_rate needs eta >= 0");
    return eta / (pp.hbar * pp.hbar) * pp.thermal_momentum_sq() * separation * separation;
}

void write_csv(std::ostream& os, const GaussianTrajectory& traj) {
    os << "t,mean_x,mean_p,sxx,sxp,spp,uncertainty_det\n" << std::setprecision(17);
    for (std::size_t k = 0; k < traj.t.size(); ++k) {
        const auto& s = traj.states[k];
        os << traj.t[k] << ',' << s.mean_x << ',' << s.mean_p << ',' << s.sxx << ',' << s.sxp << ',' << s.spp << ','
           << s.uncertainty_det() << '\n';
    }
}

}  // namespace kinlab::qm
