#include "kinlab/fokker_planck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kinlab/coefficients.hpp"
#include "kinlab/errors.hpp"

namespace kinlab::fp {

namespace {

/// B(w) = w / (e^w - 1)
double bernoulli(double w) {
    if (std::abs(w) < 1e-10) return 1.0 - 0.5 * w;
    return w / std::expm1(w);
}

/// van Leer limited slope from neighbouring differences a, b.
double limited_slope(double a, double b) { return a * b > 0.0 ? 2.0 * a * b / (a + b) : 0.0; }

std::size_t step_count(double t_end, double dt) {
    return static_cast<std::size_t>(std::max(1.0, std::ceil(t_end / dt * (1.0 - 1e-12))));
}

std::size_t record_stride(double record_interval, double dt_eff, std::size_t steps) {
    if (!(record_interval > 0.0)) return steps;
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(record_interval / dt_eff)));
}

class KramersStepper {
public:
    KramersStepper(const PhaseSpaceGrid& grid, double eta, double position_diffusion, const PhysicalParams& pp,
                   TransportScheme scheme, double dt)
        : grid_(grid), scheme_(scheme), dt_(dt), d_xx_(position_diffusion) {
        const double dp = grid.dp();
        const double D = pp.thermal_momentum_sq();
        const double c = eta * D / dp;
        gain_lo_.resize(grid.n_p);
        gain_hi_.resize(grid.n_p);
        for (std::size_t j = 0; j + 1 < grid.n_p; ++j) {
            const double p_face = 0.5 * (grid.p(j) + grid.p(j + 1));
            const double w = p_face * dp / D;
            gain_lo_[j] = c * bernoulli(w);
            gain_hi_[j] = c * bernoulli(-w);
        }
        velocity_.resize(grid.n_p);
        for (std::size_t j = 0; j < grid.n_p; ++j) velocity_[j] = grid.p(j) / pp.test_mass;
        padded_.resize(grid.n_x + 4);
        flux_.resize(grid.n_x + 1);
        flux_prev_.resize(grid.n_x);
        flux_cur_.resize(grid.n_x);
    }

    void step(PhaseSpaceField& f) {
        half_position(f, true);
        collide(f);
        half_position(f, false);
    }

private:
    void half_position(PhaseSpaceField& f, bool transport_first) {
        const double h = 0.5 * dt_;
        if (transport_first) {
            transport(f, h);
            if (d_xx_ > 0.0) diffuse(f, h);
        } else {
            if (d_xx_ > 0.0) diffuse(f, h);
            transport(f, h);
        }
    }

    void transport(PhaseSpaceField& f, double h) {
        const std::size_t nx = grid_.n_x;
        const double dx = grid_.dx();
        for (std::size_t j = 0; j < grid_.n_p; ++j) {
            double* row = &f.values()[j * nx];
            const double v = velocity_[j];
            const double nu = std::abs(v) * h / dx;
            // two ghost cells each side
            padded_[0] = row[nx - 2];
            padded_[1] = row[nx - 1];
            std::copy(row, row + nx, padded_.begin() + 2);
            padded_[nx + 2] = row[0];
            padded_[nx + 3] = row[1];
            // flux_[i] is the flux through the left face of cell i; face i sits
            // between padded cells i+1 and i+2.
            for (std::size_t i = 0; i <= nx; ++i) {
                const double* g = &padded_[i];  // g[1] = left cell, g[2] = right cell
                double face;
                if (v >= 0.0) {
                    face = g[1];
                    if (scheme_ == TransportScheme::flux_limited)
                        face += 0.5 * (1.0 - nu) * limited_slope(g[1] - g[0], g[2] - g[1]);
                } else {
                    face = g[2];
                    if (scheme_ == TransportScheme::flux_limited)
                        face -= 0.5 * (1.0 - nu) * limited_slope(g[3] - g[2], g[2] - g[1]);
                }
                flux_[i] = v * face;
            }
            const double lambda = h / dx;
            for (std::size_t i = 0; i < nx; ++i) row[i] -= lambda * (flux_[i + 1] - flux_[i]);
        }
    }

    void diffuse(PhaseSpaceField& f, double h) {
        const std::size_t nx = grid_.n_x;
        const double dx = grid_.dx();
        const double lambda = d_xx_ * h / (dx * dx);
        for (std::size_t j = 0; j < grid_.n_p; ++j) {
            double* row = &f.values()[j * nx];
            std::copy(row, row + nx, padded_.begin() + 1);
            padded_[0] = row[nx - 1];
            padded_[nx + 1] = row[0];
            for (std::size_t i = 0; i < nx; ++i)
                row[i] += lambda * (padded_[i + 2] - 2.0 * padded_[i + 1] + padded_[i]);
        }
    }

    void collide(PhaseSpaceField& f) {
        const std::size_t nx = grid_.n_x;
        const std::size_t np = grid_.n_p;
        const double lambda = dt_ / grid_.dp();
        std::fill(flux_prev_.begin(), flux_prev_.end(), 0.0);
        for (std::size_t j = 0; j < np; ++j) {
            double* row = &f.values()[j * nx];
            if (j + 1 < np) {
                const double* next = &f.values()[(j + 1) * nx];
                const double lo = gain_lo_[j];
                const double hi = gain_hi_[j];
                for (std::size_t i = 0; i < nx; ++i) flux_cur_[i] = lo * row[i] - hi * next[i];
            } else {
                std::fill(flux_cur_.begin(), flux_cur_.end(), 0.0);  // zero flux at +p_max
            }
            for (std::size_t i = 0; i < nx; ++i) row[i] += lambda * (flux_prev_[i] - flux_cur_[i]);
            std::swap(flux_prev_, flux_cur_);
        }
    }

    PhaseSpaceGrid grid_;
    TransportScheme scheme_;
    double dt_;
    double d_xx_;
    std::vector<double> gain_lo_;
    std::vector<double> gain_hi_;
    std::vector<double> velocity_;
    std::vector<double> padded_;
    std::vector<double> flux_;
    std::vector<double> flux_prev_;
    std::vector<double> flux_cur_;
};

KramersResult solve(const PhaseSpaceField& f0, double eta, double d_xx, double t_end, double dt,
                    const PhysicalParams& pp, const SolverOptions& options) {
    pp.validate();
    const auto& grid = f0.grid();
    grid.validate(pp);
    if (!(eta > 0.0)) throw std::invalid_argument("Kramers solver needs eta > 0");
    if (!(t_end >= 0.0)) throw std::invalid_argument("Kramers solver needs t_end >= 0");
    if (!(dt > 0.0)) throw std::invalid_argument("Kramers solver needs dt > 0");
    const double stable = kramers_stable_dt(grid, eta, d_xx, pp);
    if (dt > stable) throw StabilityError("Kramers time step exceeds the explicit stability bound", stable);

    KramersResult out;
    out.field = f0;
    out.moments.push_back(out.field.moments());
    if (t_end == 0.0) return out;

    out.steps = step_count(t_end, dt);
    out.dt = t_end / static_cast<double>(out.steps);
    const std::size_t stride = record_stride(options.record_interval, out.dt, out.steps);
    KramersStepper stepper(grid, eta, d_xx, pp, options.transport, out.dt);
    const double t0 = f0.time();
    for (std::size_t n = 1; n <= out.steps; ++n) {
        stepper.step(out.field);
        out.field.set_time(t0 + static_cast<double>(n) * out.dt);
        if (n % stride == 0 || n == out.steps) out.moments.push_back(out.field.moments());
    }
    return out;
}

}  // namespace

double kramers_stable_dt(const PhaseSpaceGrid& grid, double eta, double position_diffusion,
                         const PhysicalParams& pp) {
    const double dx = grid.dx();
    const double dp = grid.dp();
    const double D = pp.thermal_momentum_sq();
    double bound = dx / (grid.p_max / pp.test_mass);
    bound = std::min(bound, dp * dp / (2.0 * eta * D));
    if (position_diffusion > 0.0) bound = std::min(bound, dx * dx / (2.0 * position_diffusion));
    bound *= 0.4;

    // Diagonal weight of the explicit momentum update must stay >= 0.
    double worst = 0.0;
    for (std::size_t j = 0; j < grid.n_p; ++j) {
        double out_rate = 0.0;
        if (j + 1 < grid.n_p) out_rate += bernoulli(0.5 * (grid.p(j) + grid.p(j + 1)) * dp / D);
        if (j > 0) out_rate += bernoulli(-0.5 * (grid.p(j - 1) + grid.p(j)) * dp / D);
        worst = std::max(worst, out_rate);
    }
    if (worst > 0.0) bound = std::min(bound, dp * dp / (eta * D * worst));
    return bound;
}

KramersResult kramers_solve(const PhaseSpaceField& f0, double eta, double t_end, double dt,
                            const PhysicalParams& params, const SolverOptions& options) {
    return solve(f0, eta, 0.0, t_end, dt, params, options);
}

KramersResult quantum_kramers_solve(const PhaseSpaceField& f0, double eta, double t_end, double dt,
                                    const PhysicalParams& params, const SolverOptions& options) {
    return solve(f0, eta, position_diffusion_coefficient(eta, params), t_end, dt, params, options);
}

double smoluchowski_stable_dt(const PositionGrid& grid, double coefficient) {
    const double dx = grid.dx();
    return 0.4 * dx * dx / (2.0 * coefficient);
}

SmoluchowskiResult smoluchowski_solve(const PositionField& sigma0, double eta, double t_end, double dt,
                                      const PhysicalParams& pp, double record_interval) {
    pp.validate();
    const auto& grid = sigma0.grid();
    grid.validate();
    if (!(t_end >= 0.0)) throw std::invalid_argument("Smoluchowski solver needs t_end >= 0");
    if (!(dt > 0.0)) throw std::invalid_argument("Smoluchowski solver needs dt > 0");

    SmoluchowskiResult out;
    out.coefficient = smoluchowski_coefficient(eta, pp);
    const double stable = smoluchowski_stable_dt(grid, out.coefficient);
    if (dt > stable) throw StabilityError("Smoluchowski time step exceeds the diffusion stability bound", stable);

    out.field = sigma0;
    out.moments.push_back(out.field.moments());
    if (t_end == 0.0) return out;

    out.steps = step_count(t_end, dt);
    out.dt = t_end / static_cast<double>(out.steps);
    const std::size_t stride = record_stride(record_interval, out.dt, out.steps);
    const std::size_t nx = grid.n_x;
    const double lambda = out.coefficient * out.dt / (grid.dx() * grid.dx());
    std::vector<double> padded(nx + 2);
    auto& v = out.field.values();
    const double t0 = sigma0.time();
    for (std::size_t n = 1; n <= out.steps; ++n) {
        std::copy(v.begin(), v.end(), padded.begin() + 1);
        padded[0] = v[nx - 1];
        padded[nx + 1] = v[0];
        for (std::size_t i = 0; i < nx; ++i) v[i] += lambda * (padded[i + 2] - 2.0 * padded[i + 1] + padded[i]);
        out.field.set_time(t0 + static_cast<double>(n) * out.dt);
        if (n % stride == 0 || n == out.steps) out.moments.push_back(out.field.moments());
    }
    return out;
}

HighFrictionReport high_friction_compare(const PhaseSpaceField& f0, std::span<const double> etas, double t_end,
                                         const PhysicalParams& pp, const SolverOptions& options, double dt_safety) {
    if (etas.empty()) throw std::invalid_argument("high_friction_compare needs at least one eta");
    if (!(dt_safety > 0.0 && dt_safety <= 1.0)) throw std::invalid_argument("dt_safety must lie in (0, 1]");
    const auto& grid = f0.grid();
    grid.validate(pp);

    const PositionField sigma0 = position_marginal(f0);
    const auto maxwell = discrete_maxwell(grid, pp);
    double scale = 0.0;
    for (double v : f0.values()) scale = std::max(scale, std::abs(v));
    for (std::size_t j = 0; j < grid.n_p; ++j)
        for (std::size_t i = 0; i < grid.n_x; ++i)
            if (std::abs(f0(i, j) - sigma0.values()[i] * maxwell[j]) > 1e-8 * scale)
                throw std::invalid_argument("high_friction_compare needs f0 = sigma0(x) x discrete Maxwellian(p)");

    HighFrictionReport report;
    for (double eta : etas) {
        HighFrictionPoint point;
        point.eta = eta;
        point.kramers_dt = dt_safety * kramers_stable_dt(grid, eta, position_diffusion_coefficient(eta, pp), pp);
        const auto kramers = quantum_kramers_solve(f0, eta, t_end, point.kramers_dt, pp, options);
        point.smoluchowski_dt = dt_safety * smoluchowski_stable_dt(sigma0.grid(), smoluchowski_coefficient(eta, pp));
        const auto smol = smoluchowski_solve(sigma0, eta, t_end, point.smoluchowski_dt, pp);
        point.deviation = l1_distance(position_marginal(kramers.field), smol.field);
        report.points.push_back(point);
    }

    report.monotone_decreasing = true;
    for (std::size_t k = 1; k < report.points.size(); ++k)
        if (!(report.points[k].deviation < report.points[k - 1].deviation)) report.monotone_decreasing = false;

    if (report.points.size() >= 2) {
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        const double n = static_cast<double>(report.points.size());
        for (const auto& pt : report.points) {
            const double lx = std::log(pt.eta);
            const double ly = std::log(pt.deviation);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        report.loglog_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    return report;
}

HighFrictionReport high_friction_compare(const PhaseSpaceField& f0, double eta_base, double t_end,
                                         const PhysicalParams& params, std::size_t n_points, double factor,
                                         const SolverOptions& options) {
    if (!(eta_base > 0.0) || !(factor > 1.0) || n_points == 0)
        throw std::invalid_argument("high_friction_compare sweep needs eta_base > 0, factor > 1, n_points >= 1");
    std::vector<double> etas(n_points);
    for (std::size_t k = 0; k < n_points; ++k) etas[k] = eta_base * std::pow(factor, static_cast<double>(k));
    return high_friction_compare(f0, etas, t_end, params, options);
}

}  // namespace kinlab::fp
