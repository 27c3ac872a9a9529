#include "kinlab/wigner_spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "kinlab/errors.hpp"
#include "kinlab/structure_factor.hpp"

namespace kinlab::qm {

using cplx = std::complex<double>;

WignerSpectralField::WignerSpectralField(double length, std::size_t max_mode, double p_max, std::size_t n_p, double t)
    : length_(length), max_mode_(max_mode), p_max_(p_max), n_p_(n_p), t_(t) {
    if (!(length > 0.0) || !std::isfinite(length)) throw std::invalid_argument("spectral field length must be > 0");
    if (!(p_max > 0.0) || !std::isfinite(p_max)) throw std::invalid_argument("spectral field p_max must be > 0");
    if (n_p < 2) throw std::invalid_argument("spectral field needs n_p >= 2");
    values_.assign(n_modes() * n_p_, cplx{});
}

double WignerSpectralField::wavenumber(long k) const noexcept {
    return 2.0 * std::numbers::pi * static_cast<double>(k) / length_;
}

WignerSpectralField WignerSpectralField::from_phase_space(const PhaseSpaceField& field, std::size_t max_mode) {
    const auto& g = field.grid();
    if (g.n_x < 2 * max_mode + 1)
        throw std::invalid_argument("spectral field: " + std::to_string(g.n_x) + " x-nodes cannot resolve " +
                                    std::to_string(max_mode) + " modes");
    WignerSpectralField out(g.x_max - g.x_min, max_mode, g.p_max, g.n_p, field.time());
    const auto K = static_cast<long>(max_mode);
    const double inv_n = 1.0 / static_cast<double>(g.n_x);
    for (long k = -K; k <= K; ++k) {
        const double kappa = out.wavenumber(k);
        for (std::size_t i = 0; i < g.n_x; ++i) {
            const double theta = -kappa * g.x(i);
            const cplx phase(std::cos(theta) * inv_n, std::sin(theta) * inv_n);
            for (std::size_t j = 0; j < g.n_p; ++j) out(k, j) += phase * field(i, j);
        }
    }
    return out;
}

PhaseSpaceField WignerSpectralField::to_phase_space(std::size_t n_x, double x_min) const {
    PhaseSpaceGrid g{x_min, x_min + length_, n_x, p_max_, n_p_};
    PhaseSpaceField out(g, t_);
    const auto K = static_cast<long>(max_mode_);
    for (std::size_t i = 0; i < n_x; ++i) {
        const double x = g.x(i);
        for (long k = -K; k <= K; ++k) {
            const double theta = wavenumber(k) * x;
            const cplx phase(std::cos(theta), std::sin(theta));
            for (std::size_t j = 0; j < n_p_; ++j) out(i, j) += (phase * (*this)(k, j)).real();
        }
    }
    return out;
}

double WignerSpectralField::reality_error() const {
    double err = 0.0;
    const auto K = static_cast<long>(max_mode_);
    for (long k = 0; k <= K; ++k)
        for (std::size_t j = 0; j < n_p_; ++j) err = std::max(err, std::abs((*this)(-k, j) - std::conj((*this)(k, j))));
    return err;
}

bool WignerSpectralField::same_layout(const WignerSpectralField& o) const noexcept {
    return length_ == o.length_ && max_mode_ == o.max_mode_ && p_max_ == o.p_max_ && n_p_ == o.n_p_;
}

double WignerSpectralField::max_difference(const WignerSpectralField& other) const {
    if (!same_layout(other)) throw std::invalid_argument("spectral fields have different layouts");
    double d = 0.0;
    for (std::size_t n = 0; n < values_.size(); ++n) d = std::max(d, std::abs(values_[n] - other.values_[n]));
    return d;
}

std::vector<double> WignerSpectralField::homogeneous_sector() const {
    std::vector<double> out(n_p_);
    for (std::size_t j = 0; j < n_p_; ++j) out[j] = (*this)(0, j).real();
    return out;
}

WignerBoltzmannOperator::WignerBoltzmannOperator(const WignerSpectralField& layout, const PhysicalParams& pp,
                                                 const CrossSection& xs, KernelMode mode)
    : layout_(layout.length(), layout.max_mode(), layout.p_max(), layout.n_p()), params_(pp), mode_(mode) {
    pp.validate();
    if (mode == KernelMode::quantum && pp.hbar < 0.0) throw std::invalid_argument("physics.hbar must be >= 0");
    const std::size_t n_p = layout.n_p();
    const auto K = static_cast<long>(layout.max_mode());
    const double dp = layout.dp();
    const double M = pp.test_mass;
    max_shift_ = static_cast<long>(n_p) - 1;
    rate_.assign(static_cast<std::size_t>(2 * max_shift_ + 1), std::vector<double>(n_p, 0.0));
    loss_.assign(static_cast<std::size_t>(2 * K + 1), std::vector<double>(n_p, 0.0));

    const double cosh_scale = mode == KernelMode::quantum ? pp.inv_temperature * pp.hbar / (4.0 * M) : 0.0;
    for (long s = -max_shift_; s <= max_shift_; ++s) {
        if (s == 0) continue;
        const double q = static_cast<double>(s) * dp;
        const double weight = pp.density / (M * M) * dp * xs(std::abs(q));
        if (weight == 0.0) continue;
        auto& row = rate_[static_cast<std::size_t>(s + max_shift_)];
        for (std::size_t j = 0; j < n_p; ++j) {
            const long target = static_cast<long>(j) + s;
            if (target < 0 || target >= static_cast<long>(n_p)) continue;
            row[j] = weight * structure_factor_brownian(std::abs(q), energy_transfer_1d(q, layout.p(j), pp), pp);
            for (long k = -K; k <= K; ++k)
                loss_[static_cast<std::size_t>(k + K)][j] += row[j] * std::cosh(cosh_scale * q * layout.wavenumber(k));
        }
    }
    double max_loss = 0.0;
    for (const auto& row : loss_) max_loss = std::max(max_loss, *std::max_element(row.begin(), row.end()));
    stable_dt_ = max_loss > 0.0 ? 1.0 / max_loss : std::numeric_limits<double>::infinity();
}

double WignerBoltzmannOperator::transfer_rate(long s, std::size_t j) const {
    if (s == 0 || std::abs(s) > max_shift_) return 0.0;
    return rate_[static_cast<std::size_t>(s + max_shift_)][j];
}

WignerSpectralField WignerBoltzmannOperator::collision(const WignerSpectralField& f) const {
    if (!f.same_layout(layout_)) throw std::invalid_argument("spectral field layout does not match the operator");
    WignerSpectralField out(f.length(), f.max_mode(), f.p_max(), f.n_p(), f.time());
    const auto K = static_cast<long>(f.max_mode());
    const auto n_p = static_cast<long>(f.n_p());
    for (long k = -K; k <= K; ++k) {
        const auto& loss = loss_[static_cast<std::size_t>(k + K)];
        for (long j = 0; j < n_p; ++j) {
            cplx acc = -loss[static_cast<std::size_t>(j)] * f(k, static_cast<std::size_t>(j));
            for (long s = -max_shift_; s <= max_shift_; ++s) {
                const long src = j - s;
                if (s == 0 || src < 0 || src >= n_p) continue;
                const double r = rate_[static_cast<std::size_t>(s + max_shift_)][static_cast<std::size_t>(src)];
                if (r != 0.0) acc += r * f(k, static_cast<std::size_t>(src));
            }
            out(k, static_cast<std::size_t>(j)) = acc;
        }
    }
    return out;
}

void WignerBoltzmannOperator::transport(WignerSpectralField& f, double h) const {
    const auto K = static_cast<long>(f.max_mode());
    for (long k = -K; k <= K; ++k) {
        if (k == 0) continue;
        const double kappa = f.wavenumber(k);
        for (std::size_t j = 0; j < f.n_p(); ++j) {
            const double theta = -kappa * f.p(j) * h / params_.test_mass;
            f(k, j) *= cplx(std::cos(theta), std::sin(theta));
        }
    }
}

void WignerBoltzmannOperator::step(WignerSpectralField& f, double dt) const {
    if (!(dt > 0.0)) throw std::invalid_argument("spectral step needs dt > 0");
    if (dt > stable_dt_) throw StabilityError("spectral collision step exceeds 1 / max loss rate", stable_dt_);
    transport(f, 0.5 * dt);
    const auto c = collision(f);
    const auto K = static_cast<long>(f.max_mode());
    for (long k = -K; k <= K; ++k)
        for (std::size_t j = 0; j < f.n_p(); ++j) f(k, j) += dt * c(k, j);
    transport(f, 0.5 * dt);
    f.set_time(f.time() + dt);
}

WignerSpectralField wigner_boltzmann_step(const WignerSpectralField& field, double dt, const PhysicalParams& params,
                                          const CrossSection& xs, KernelMode mode) {
    const WignerBoltzmannOperator op(field, params, xs, mode);
    WignerSpectralField out = field;
    op.step(out, dt);
    return out;
}

WignerSpectralField wigner_boltzmann_evolve(const WignerSpectralField& field, double t_end, double dt,
                                            const PhysicalParams& params, const CrossSection& xs, KernelMode mode) {
    if (!(t_end >= 0.0)) throw std::invalid_argument("spectral evolution needs t_end >= 0");
    if (!(dt > 0.0)) throw std::invalid_argument("spectral evolution needs dt > 0");
    const WignerBoltzmannOperator op(field, params, xs, mode);
    WignerSpectralField out = field;
    if (t_end == 0.0) return out;
    const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(t_end / dt * (1.0 - 1e-12))));
    const double h = t_end / static_cast<double>(steps);
    const double t0 = field.time();
    for (std::size_t n = 1; n <= steps; ++n) {
        op.step(out, h);
        out.set_time(t0 + static_cast<double>(n) * h);
    }
    return out;
}

}  // namespace kinlab::qm
