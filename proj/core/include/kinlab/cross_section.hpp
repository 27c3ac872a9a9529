#pragma once

#include <utility>
#include <variant>
#include <vector>

namespace kinlab {

/// Single-collision cross-section Sigma(q) as a function of the modulus of
/// the momentum transfer.
class CrossSection {
public:
    struct Constant {
        double sigma0;
    };
    /// sigma0 * exp(-q^2 / (2 width^2))
    struct Gaussian {
        double sigma0;
        double width;
    };
    /// Linear interpolation between knots, constant extrapolation outside.
    struct Tabulated {
        std::vector<double> q;
        std::vector<double> sigma;
    };

    static CrossSection constant(double sigma0);
    static CrossSection gaussian(double sigma0, double width);
    static CrossSection tabulated(std::vector<double> q, std::vector<double> sigma);
    static CrossSection tabulated(const std::vector<std::pair<double, double>>& table);

    double operator()(double q) const;

    /// Upper bound of Sigma on [q_lo, q_hi] (exact for all three models).
    double upper_bound(double q_lo, double q_hi) const;

    /// Points in (q_lo, q_hi) where Sigma has a kink.
    std::vector<double> breakpoints(double q_lo, double q_hi) const;

    bool is_zero() const;

    const std::variant<Constant, Gaussian, Tabulated>& model() const noexcept { return model_; }

private:
    explicit CrossSection(std::variant<Constant, Gaussian, Tabulated> m) : model_(std::move(m)) {}

    std::variant<Constant, Gaussian, Tabulated> model_;
};

}  // namespace kinlab
