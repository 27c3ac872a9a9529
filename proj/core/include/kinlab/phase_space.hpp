#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include "kinlab/physical_params.hpp"

namespace kinlab {

/// Uniform cell-centred grid on [x_min, x_max) x [-p_max, p_max]; periodic in
/// x, zero-flux in p.
struct PhaseSpaceGrid {
    double x_min = -1.0;
    double x_max = 1.0;
    std::size_t n_x = 64;
    double p_max = 6.0;
    std::size_t n_p = 64;

    /// Checks n_x, n_p >= 8 and the extents; if params are given also that
    /// p_max covers six thermal momenta.
    void validate() const;
    void validate(const PhysicalParams& params) const;

    double dx() const noexcept { return (x_max - x_min) / static_cast<double>(n_x); }
    double dp() const noexcept { return 2.0 * p_max / static_cast<double>(n_p); }
    double x(std::size_t i) const noexcept { return x_min + (static_cast<double>(i) + 0.5) * dx(); }
    double p(std::size_t j) const noexcept { return -p_max + (static_cast<double>(j) + 0.5) * dp(); }
    std::size_t size() const noexcept { return n_x * n_p; }

    friend bool operator==(const PhaseSpaceGrid&, const PhaseSpaceGrid&) = default;
};

struct PhaseSpaceMoments {
    double t = 0.0;
    double mean_x = 0.0;
    double mean_p = 0.0;
    double var_x = 0.0;
    double var_p = 0.0;
    double cov_xp = 0.0;
    double norm = 0.0;
};

/// Distribution or Wigner function sampled on a PhaseSpaceGrid. Storage is
/// p-major: value(i, j) lives at values[j * n_x + i], so each p row is
/// contiguous in x.
class PhaseSpaceField {
public:
    PhaseSpaceField() = default;
    explicit PhaseSpaceField(PhaseSpaceGrid grid, double t = 0.0);

    /// f(x, p) sampled at cell centres (not normalised).
    static PhaseSpaceField from_function(const PhaseSpaceGrid& grid, const std::function<double(double, double)>& f);

    const PhaseSpaceGrid& grid() const noexcept { return grid_; }
    double time() const noexcept { return t_; }
    void set_time(double t) noexcept { t_ = t; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return values_[j * grid_.n_x + i]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return values_[j * grid_.n_x + i]; }
    std::vector<double>& values() noexcept { return values_; }
    const std::vector<double>& values() const noexcept { return values_; }

    /// Sum f dx dp.
    double integral() const;
    void normalize();
    double min_value() const;
    PhaseSpaceMoments moments() const;

    /// Integral over p, one value per x cell.
    std::vector<double> position_marginal() const;
    /// Integral over x, one value per p cell.
    std::vector<double> momentum_marginal() const;

private:
    PhaseSpaceGrid grid_;
    double t_ = 0.0;
    std::vector<double> values_;
};

/// Uniform periodic grid on [x_min, x_max) for position-only fields.
struct PositionGrid {
    double x_min = -1.0;
    double x_max = 1.0;
    std::size_t n_x = 64;

    void validate() const;
    double dx() const noexcept { return (x_max - x_min) / static_cast<double>(n_x); }
    double x(std::size_t i) const noexcept { return x_min + (static_cast<double>(i) + 0.5) * dx(); }

    friend bool operator==(const PositionGrid&, const PositionGrid&) = default;
};

struct PositionMoments {
    double t = 0.0;
    double mean_x = 0.0;
    double var_x = 0.0;
    double norm = 0.0;
};

class PositionField {
public:
    PositionField() = default;
    PositionField(PositionGrid grid, std::vector<double> values, double t = 0.0);

    static PositionField from_function(const PositionGrid& grid, const std::function<double(double)>& f);

    const PositionGrid& grid() const noexcept { return grid_; }
    double time() const noexcept { return t_; }
    void set_time(double t) noexcept { t_ = t; }
    std::vector<double>& values() noexcept { return values_; }
    const std::vector<double>& values() const noexcept { return values_; }

    double integral() const;
    void normalize();
    PositionMoments moments() const;

private:
    PositionGrid grid_;
    double t_ = 0.0;
    std::vector<double> values_;
};

/// x-marginal of a phase-space field as a PositionField on the same x grid.
PositionField position_marginal(const PhaseSpaceField& f);

/// Sum |a - b| dx; grids must match.
double l1_distance(const PositionField& a, const PositionField& b);

/// Maxwell density exp(-beta p^2 / 2M) sampled at the p cell centres and
/// normalised so that sum * dp = 1.
std::vector<double> discrete_maxwell(const PhaseSpaceGrid& grid, const PhysicalParams& params);

/// Rows "x,p,f".
void write_field_csv(std::ostream& os, const PhaseSpaceField& f);
/// Columns: t, mean_x, mean_p, var_x, var_p, cov_xp, norm.
void write_moments_csv(std::ostream& os, const std::vector<PhaseSpaceMoments>& series);

}  // namespace kinlab
