#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "kinlab/cross_section.hpp"
#include "kinlab/phase_space.hpp"
#include "kinlab/physical_params.hpp"

namespace kinlab::qm {

enum class KernelMode { quantum, classical };

/// Fourier-in-x representation of a one-dimensional Wigner function on a
/// periodic box of length L: f(x, p) = sum_{|k| <= K} ft(k, p) exp(i kappa_k x),
/// kappa_k = 2 pi k / L. Momentum axis is cell-centred on [-p_max, p_max].
class WignerSpectralField {
public:
    WignerSpectralField() = default;
    WignerSpectralField(double length, std::size_t max_mode, double p_max, std::size_t n_p, double t = 0.0);

    /// Truncated DFT of a sampled field; requires n_x >= 2 max_mode + 1.
    static WignerSpectralField from_phase_space(const PhaseSpaceField& field, std::size_t max_mode);
    /// Real part of the synthesis on n_x cell centres of [x_min, x_min + L).
    PhaseSpaceField to_phase_space(std::size_t n_x, double x_min) const;

    double length() const noexcept { return length_; }
    std::size_t max_mode() const noexcept { return max_mode_; }
    std::size_t n_modes() const noexcept { return 2 * max_mode_ + 1; }
    std::size_t n_p() const noexcept { return n_p_; }
    double p_max() const noexcept { return p_max_; }
    double dp() const noexcept { return 2.0 * p_max_ / static_cast<double>(n_p_); }
    double p(std::size_t j) const noexcept { return -p_max_ + (static_cast<double>(j) + 0.5) * dp(); }
    double wavenumber(long k) const noexcept;
    double time() const noexcept { return t_; }
    void set_time(double t) noexcept { t_ = t; }

    /// Mode k in [-K, K], momentum cell j.
    std::complex<double>& operator()(long k, std::size_t j) noexcept { return values_[index(k, j)]; }
    std::complex<double> operator()(long k, std::size_t j) const noexcept { return values_[index(k, j)]; }

    /// max |ft(-k, p) - conj(ft(k, p))|
    double reality_error() const;
    /// max |a - b| over all modes and momenta; layouts must match.
    double max_difference(const WignerSpectralField& other) const;
    /// Real part of the k = 0 mode: the x-average of f, one value per p cell.
    std::vector<double> homogeneous_sector() const;
    bool same_layout(const WignerSpectralField& other) const noexcept;

private:
    std::size_t index(long k, std::size_t j) const noexcept {
        return static_cast<std::size_t>(k + static_cast<long>(max_mode_)) * n_p_ + j;
    }

    double length_ = 1.0;
    std::size_t max_mode_ = 0;
    double p_max_ = 1.0;
    std::size_t n_p_ = 0;
    double t_ = 0.0;
    std::vector<std::complex<double>> values_;
};

/// Linear Boltzmann operator for the Brownian structure factor in the
/// Fourier-x representation, on a collision lattice q = s dp that stays on the
/// momentum grid. Gain and loss use the one-dimensional Brownian kernel; in
/// quantum mode the loss of mode kappa carries cosh((beta hbar / 4M) q kappa),
/// which reduces to 1 in classical mode.
class WignerBoltzmannOperator {
public:
    WignerBoltzmannOperator(const WignerSpectralField& layout, const PhysicalParams& params, const CrossSection& xs,
                            KernelMode mode);

    /// Largest dt for which the explicit collision update is accepted.
    double stable_dt() const noexcept { return stable_dt_; }

    /// Transport phase over dt/2, explicit collision step, transport phase
    /// over dt/2. Throws StabilityError above stable_dt().
    void step(WignerSpectralField& field, double dt) const;

    /// Collision term alone, for tests.
    WignerSpectralField collision(const WignerSpectralField& field) const;

    /// Rate of the transfer p_j -> p_{j+s}; zero when it leaves the grid.
    double transfer_rate(long s, std::size_t j) const;

private:
    void transport(WignerSpectralField& field, double h) const;

    WignerSpectralField layout_;
    PhysicalParams params_;
    KernelMode mode_;
    long max_shift_ = 0;
    std::vector<std::vector<double>> rate_;  // [s + max_shift][j]
    std::vector<std::vector<double>> loss_;  // [k + K][j], cosh-weighted in quantum mode
    double stable_dt_ = 0.0;
};

/// One step of the operator above built for this field.
WignerSpectralField wigner_boltzmann_step(const WignerSpectralField& field, double dt, const PhysicalParams& params,
                                          const CrossSection& xs, KernelMode mode);

/// Repeated steps with dt_eff = t_end / ceil(t_end / dt).
WignerSpectralField wigner_boltzmann_evolve(const WignerSpectralField& field, double t_end, double dt,
                                            const PhysicalParams& params, const CrossSection& xs, KernelMode mode);

}  // namespace kinlab::qm
