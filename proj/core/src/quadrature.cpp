#include "kinlab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "kinlab/errors.hpp"

namespace kinlab {

namespace {

struct Panel {
    double a;
    double b;
    double value;
    double error;
    double l1;

    friend bool operator<(const Panel& lhs, const Panel& rhs) { return lhs.error < rhs.error; }
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b) {
    using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
    double err = 0.0;
    double l1 = 0.0;
    // max_depth = 0: a single Kronrod panel; boost reports |K - G| on the
    // reference interval [-1, 1], so rescale it here.
    const double value = Rule::integrate(f, a, b, 0, 0.0, &err, &l1);
    return {a, b, value, err * 0.5 * (b - a), l1};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol,
                                    std::span<const double> breakpoints, double abs_floor) {
    constexpr std::size_t max_panels = 4000;

    std::vector<double> nodes{a};
    for (double x : breakpoints)
        if (x > a && x < b) nodes.push_back(x);
    std::sort(nodes.begin() + 1, nodes.end());
    nodes.push_back(b);

    std::priority_queue<Panel> panels;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        if (nodes[i + 1] > nodes[i]) panels.push(evaluate_panel(f, nodes[i], nodes[i + 1]));

    auto totals = [&panels] {
        auto copy = panels;
        double value = 0.0;
        double error = 0.0;
        double l1 = 0.0;
        while (!copy.empty()) {
            value += copy.top().value;
            error += copy.top().error;
            l1 += copy.top().l1;
            copy.pop();
        }
        return std::array<double, 3>{value, error, l1};
    };

    const auto initial = totals();
    double running_error = initial[1];
    double running_l1 = initial[2];
    while (!panels.empty() && running_error > rel_tol * running_l1 + abs_floor && panels.size() < max_panels) {
        const Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const Panel left = evaluate_panel(f, worst.a, mid);
        const Panel right = evaluate_panel(f, mid, worst.b);
        running_error += left.error + right.error - worst.error;
        running_l1 += left.l1 + right.l1 - worst.l1;
        panels.push(left);
        panels.push(right);
    }
    // Re-sum from the panels to shed the drift of the running updates.
    const auto [value, error, l1] = totals();

    if (!(error <= rel_tol * l1 + abs_floor) || !std::isfinite(value)) {
        const double achieved = l1 > 0.0 ? error / l1 : error;
        throw QuadratureError("adaptive quadrature did not converge", achieved, rel_tol);
    }
    return {value, error};
}

}  // namespace kinlab
