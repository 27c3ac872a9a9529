#include "kinlab/cross_section.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kinlab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double interpolate(const CrossSection::Tabulated& t, double q) {
    if (q <= t.q.front()) return t.sigma.front();
    if (q >= t.q.back()) return t.sigma.back();
    const auto hi = std::upper_bound(t.q.begin(), t.q.end(), q);
    const auto i = static_cast<std::size_t>(hi - t.q.begin());
    const double w = (q - t.q[i - 1]) / (t.q[i] - t.q[i - 1]);
    return (1.0 - w) * t.sigma[i - 1] + w * t.sigma[i];
}

}  // namespace

CrossSection CrossSection::constant(double sigma0) {
    if (!(sigma0 >= 0.0) || !std::isfinite(sigma0))
        throw std::invalid_argument("cross_section.sigma0 must be finite and >= 0");
    return CrossSection(Constant{sigma0});
}

CrossSection CrossSection::gaussian(double sigma0, double width) {
    if (!(sigma0 >= 0.0) || !std::isfinite(sigma0))
        throw std::invalid_argument("cross_section.sigma0 must be finite and >= 0");
    if (!(width > 0.0) || !std::isfinite(width))
        throw std::invalid_argument("cross_section.width must be finite and > 0");
    return CrossSection(Gaussian{sigma0, width});
}

CrossSection CrossSection::tabulated(std::vector<double> q, std::vector<double> sigma) {
    if (q.empty() || q.size() != sigma.size())
        throw std::invalid_argument("cross_section.table needs matching non-empty q and sigma columns");
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (!std::isfinite(q[i]) || q[i] < 0.0)
            throw std::invalid_argument("cross_section.table: q must be finite and >= 0");
        if (!std::isfinite(sigma[i]) || sigma[i] < 0.0)
            throw std::invalid_argument("cross_section.table: sigma must be finite and >= 0");
        if (i > 0 && !(q[i] > q[i - 1]))
            throw std::invalid_argument("cross_section.table: q abscissae must be strictly increasing");
    }
    return CrossSection(Tabulated{std::move(q), std::move(sigma)});
}

CrossSection CrossSection::tabulated(const std::vector<std::pair<double, double>>& table) {
    std::vector<double> q;
    std::vector<double> s;
    q.reserve(table.size());
    s.reserve(table.size());
    for (const auto& [qi, si] : table) {
        q.push_back(qi);
        s.push_back(si);
    }
    return tabulated(std::move(q), std::move(s));
}

double CrossSection::operator()(double q) const {
    return std::visit(overloaded{
                          [](const Constant& c) { return c.sigma0; },
                          [q](const Gaussian& g) { return g.sigma0 * std::exp(-0.5 * (q * q) / (g.width * g.width)); },
                          [q](const Tabulated& t) { return interpolate(t, q); },
                      },
                      model_);
}

double CrossSection::upper_bound(double q_lo, double q_hi) const {
    return std::visit(overloaded{
                          [](const Constant& c) { return c.sigma0; },
                          [&](const Gaussian&) { return (*this)(std::max(q_lo, 0.0)); },
                          [&](const Tabulated& t) {
                              double m = std::max(interpolate(t, q_lo), interpolate(t, q_hi));
                              for (std::size_t i = 0; i < t.q.size(); ++i)
                                  if (t.q[i] > q_lo && t.q[i] < q_hi) m = std::max(m, t.sigma[i]);
                              return m;
                          },
                      },
                      model_);
}

std::vector<double> CrossSection::breakpoints(double q_lo, double q_hi) const {
    std::vector<double> out;
    if (const auto* t = std::get_if<Tabulated>(&model_)) {
        for (double qi : t->q)
            if (qi > q_lo && qi < q_hi) out.push_back(qi);
    }
    return out;
}

bool CrossSection::is_zero() const {
    return std::visit(overloaded{
                          [](const Constant& c) { return c.sigma0 == 0.0; },
                          [](const Gaussian& g) { return g.sigma0 == 0.0; },
                          [](const Tabulated& t) {
                              return std::all_of(t.sigma.begin(), t.sigma.end(), [](double s) { return s == 0.0; });
                          },
                      },
                      model_);
}

}  // namespace kinlab
