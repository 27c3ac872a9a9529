#include "kinlab/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace kinlab {

void PhaseSpaceGrid::validate() const {
    if (n_x < 8 || n_p < 8) throw std::invalid_argument("phase-space grid needs n_x, n_p >= 8");
    if (!(x_max > x_min)) throw std::invalid_argument("phase-space grid needs x_max > x_min");
    if (!(p_max > 0.0)) throw std::invalid_argument("phase-space grid needs p_max > 0");
}

void PhaseSpaceGrid::validate(const PhysicalParams& params) const {
    validate();
    if (p_max < 6.0 * std::sqrt(params.thermal_momentum_sq()) * (1.0 - 1e-12))
        throw std::invalid_argument("phase-space grid p_max must cover six thermal momenta");
}

PhaseSpaceField::PhaseSpaceField(PhaseSpaceGrid grid, double t)
    : grid_(grid), t_(t), values_(grid.size(), 0.0) {
    grid_.validate();
}

PhaseSpaceField PhaseSpaceField::from_function(const PhaseSpaceGrid& grid,
                                               const std::function<double(double, double)>& f) {
    PhaseSpaceField out(grid);
    for (std::size_t j = 0; j < grid.n_p; ++j)
        for (std::size_t i = 0; i < grid.n_x; ++i) out(i, j) = f(grid.x(i), grid.p(j));
    return out;
}

double PhaseSpaceField::integral() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s * grid_.dx() * grid_.dp();
}

void PhaseSpaceField::normalize() {
    const double total = integral();
    if (!(total != 0.0)) throw std::invalid_argument("cannot normalise a field with zero integral");
    for (double& v : values_) v /= total;
}

double PhaseSpaceField::min_value() const { return *std::min_element(values_.begin(), values_.end()); }

PhaseSpaceMoments PhaseSpaceField::moments() const {
    const double cell = grid_.dx() * grid_.dp();
    double s0 = 0.0, sx = 0.0, sp = 0.0, sxx = 0.0, spp = 0.0, sxp = 0.0;
    for (std::size_t j = 0; j < grid_.n_p; ++j) {
        const double p = grid_.p(j);
        double row = 0.0, row_x = 0.0, row_xx = 0.0;
        for (std::size_t i = 0; i < grid_.n_x; ++i) {
            const double x = grid_.x(i);
            const double f = (*this)(i, j);
            row += f;
            row_x += f * x;
            row_xx += f * x * x;
        }
        s0 += row;
        sx += row_x;
        sxx += row_xx;
        sp += row * p;
        spp += row * p * p;
        sxp += row_x * p;
    }
    PhaseSpaceMoments m;
    m.t = t_;
    m.norm = s0 * cell;
    m.mean_x = sx / s0;
    m.mean_p = sp / s0;
    m.var_x = sxx / s0 - m.mean_x * m.mean_x;
    m.var_p = spp / s0 - m.mean_p * m.mean_p;
    m.cov_xp = sxp / s0 - m.mean_x * m.mean_p;
    return m;
}

std::vector<double> PhaseSpaceField::position_marginal() const {
    std::vector<double> out(grid_.n_x, 0.0);
    for (std::size_t j = 0; j < grid_.n_p; ++j)
        for (std::size_t i = 0; i < grid_.n_x; ++i) out[i] += (*this)(i, j);
    for (double& v : out) v *= grid_.dp();
    return out;
}

std::vector<double> PhaseSpaceField::momentum_marginal() const {
    std::vector<double> out(grid_.n_p, 0.0);
    for (std::size_t j = 0; j < grid_.n_p; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < grid_.n_x; ++i) s += (*this)(i, j);
        out[j] = s * grid_.dx();
    }
    return out;
}

void PositionGrid::validate() const {
    if (n_x < 8) throw std::invalid_argument("position grid needs n_x >= 8");
    if (!(x_max > x_min)) throw std::invalid_argument("position grid needs x_max > x_min");
}

PositionField::PositionField(PositionGrid grid, std::vector<double> values, double t)
    : grid_(grid), t_(t), values_(std::move(values)) {
    grid_.validate();
    if (values_.size() != grid_.n_x) throw std::invalid_argument("position field size does not match its grid");
}

PositionField PositionField::from_function(const PositionGrid& grid, const std::function<double(double)>& f) {
    std::vector<double> v(grid.n_x);
    for (std::size_t i = 0; i < grid.n_x; ++i) v[i] = f(grid.x(i));
    return PositionField(grid, std::move(v));
}

double PositionField::integral() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s * grid_.dx();
}

void PositionField::normalize() {
    const double total = integral();
    if (!(total != 0.0)) throw std::invalid_argument("cannot normalise a field with zero integral");
    for (double& v : values_) v /= total;
}

PositionMoments PositionField::moments() const {
    double s0 = 0.0, sx = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < grid_.n_x; ++i) {
        const double x = grid_.x(i);
        s0 += values_[i];
        sx += values_[i] * x;
        sxx += values_[i] * x * x;
    }
    PositionMoments m;
    m.t = t_;
    m.norm = s0 * grid_.dx();
    m.mean_x = sx / s0;
    m.var_x = sxx / s0 - m.mean_x * m.mean_x;
    return m;
}

PositionField position_marginal(const PhaseSpaceField& f) {
    const auto& g = f.grid();
    return PositionField(PositionGrid{g.x_min, g.x_max, g.n_x}, f.position_marginal(), f.time());
}

double l1_distance(const PositionField& a, const PositionField& b) {
    if (!(a.grid() == b.grid())) throw std::invalid_argument("l1_distance: grids differ");
    double s = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) s += std::abs(a.values()[i] - b.values()[i]);
    return s * a.grid().dx();
}

std::vector<double> discrete_maxwell(const PhaseSpaceGrid& grid, const PhysicalParams& params) {
    std::vector<double> w(grid.n_p);
    double s = 0.0;
    for (std::size_t j = 0; j < grid.n_p; ++j) {
        const double p = grid.p(j);
        w[j] = std::exp(-params.inv_temperature * p * p / (2.0 * params.test_mass));
        s += w[j];
    }
    for (double& v : w) v /= s * grid.dp();
    return w;
}

void write_field_csv(std::ostream& os, const PhaseSpaceField& f) {
    const auto& g = f.grid();
    os << "x,p,f\n" << std::setprecision(17);
    for (std::size_t j = 0; j < g.n_p; ++j)
        for (std::size_t i = 0; i < g.n_x; ++i) os << g.x(i) << ',' << g.p(j) << ',' << f(i, j) << '\n';
}

void write_moments_csv(std::ostream& os, const std::vector<PhaseSpaceMoments>& series) {
    os << "t,mean_x,mean_p,var_x,var_p,cov_xp,norm\n" << std::setprecision(17);
    for (const auto& m : series)
        os << m.t << ',' << m.mean_x << ',' << m.mean_p << ',' << m.var_x << ',' << m.var_p << ',' << m.cov_xp << ','
           << m.norm << '\n';
}

}  // namespace kinlab
