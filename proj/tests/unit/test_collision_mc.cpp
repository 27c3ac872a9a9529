#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "kinlab/coefficients.hpp"
#include "kinlab/collision_mc.hpp"
#include "kinlab/structure_factor.hpp"

using namespace kinlab;
using namespace kinlab::mc;

namespace {

constexpr double pi = std::numbers::pi;

double simpson(auto f, double a, double b, int n) {
    const double h = (b - a) / (2 * n);
    double s = f(a) + f(b);
    for (int i = 1; i < 2 * n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

// Radial density of |q| at momentum (0, 0, pz): q^2 Sigma(q) int_{-1}^{1} S(q, E(q, pz u)) du.
double radial_density(double q, double pz, const PhysicalParams& pp, const CrossSection& xs) {
    if (q <= 0.0) return 0.0;
    const double ang = simpson(
        [&](double u) { return structure_factor_mb(q, q * q / (2 * pp.test_mass) + pz * q * u / pp.test_mass, pp); },
        -1.0, 1.0, 200);
    return q * q * xs(q) * ang;
}

}  // namespace

TEST_CASE("total rate: Brownian closed form at rest") {
    const PhysicalParams pp;
    const double a = pp.mass_ratio();
    const double exact = 16 * pi * pp.density * pp.gas_mass / (pp.test_mass * pp.test_mass * pp.inv_temperature * (1 + 2 * a)) *
                         std::sqrt(pp.inv_temperature * pp.gas_mass / (2 * pi));
    CHECK(exact == doctest::Approx(0.5285).epsilon(1e-3));
    const double r = total_rate({0, 0, 0}, pp, CrossSection::constant(1.0), StructureFactorForm::brownian);
    CHECK(std::abs(r / exact - 1.0) < 1e-8);
    CHECK(total_rate({1, 2, 3}, pp, CrossSection::constant(0.0)) == 0.0);
}

TEST_CASE("total rate is isotropic") {
    const PhysicalParams pp;
    const auto xs = CrossSection::gaussian(1.0, 0.7);
    const double r = total_rate({0, 0, 1.7}, pp, xs);
    CHECK(total_rate({1.7, 0, 0}, pp, xs) == doctest::Approx(r).epsilon(1e-9));
    CHECK(total_rate({1.7 / std::sqrt(2.0), -1.7 / std::sqrt(2.0), 0}, pp, xs) == doctest::Approx(r).epsilon(1e-9));
}

TEST_CASE("majorant rate bounds the total rate") {
    const PhysicalParams pp;
    const auto xs = CrossSection::constant(1.0);
    const TransferSampler sampler(pp, xs, StructureFactorForm::maxwell_boltzmann, 6.0);
    for (double pz : {0.0, 0.3, 1.0, 2.5, 5.0, 9.0}) {
        const Vec3 p{0, 0, pz};
        CHECK(sampler.majorant_rate(p) >= total_rate(p, pp, xs));
    }
}

TEST_CASE("waiting times are exponential with mean 1/R(p)") {
    const PhysicalParams pp;
    const auto xs = CrossSection::constant(1.0);
    const TransferSampler sampler(pp, xs, StructureFactorForm::maxwell_boltzmann, 4.0);
    const Vec3 p{0.4, -0.8, 1.1};
    auto rng = make_stream(11, 0);
    SamplerStats stats;
    const int n = 100000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        const double w = sampler.sample_waiting_time(p, rng, stats);
        s += w;
        s2 += w * w;
    }
    const double mean = s / n;
    const double se = std::sqrt((s2 / n - mean * mean) / n);
    const double expected = 1.0 / total_rate(p, pp, xs);
    CHECK(std::abs(mean - expected) < 3 * se);
    // Exponential: standard deviation equals the mean.
    CHECK(std::sqrt(s2 / n - mean * mean) == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("mean energy transfer at rest matches quadrature") {
    const PhysicalParams pp;
    const auto xs = CrossSection::constant(1.0);
    const TransferSampler sampler(pp, xs, StructureFactorForm::maxwell_boltzmann, 1.0);
    const double qmax = transfer_extent(0.0, pp, StructureFactorForm::maxwell_boltzmann);
    auto weight = [&](double q) { return q <= 0 ? 0.0 : q * q * structure_factor_mb(q, q * q / 2, pp); };
    const double oracle = simpson([&](double q) { return weight(q) * q * q / 2; }, 0, qmax, 4000) /
                          simpson(weight, 0, qmax, 4000);
    auto rng = make_stream(3, 1);
    SamplerStats stats;
    const int n = 200000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        const auto q = sampler.sample_transfer({0, 0, 0}, rng, stats);
        const double e = energy_transfer(q, {0, 0, 0}, pp);
        s += e;
        s2 += e * e;
    }
    const double mean = s / n;
    const double se = std::sqrt((s2 / n - mean * mean) / n);
    CHECK(std::abs(mean - oracle) < 3 * se);
    CHECK(stats.acceptance_rate() > 1e-3);
}

TEST_CASE("azimuth of q about p is uniform (Kolmogorov-Smirnov)") {
    const PhysicalParams pp;
    const auto xs = CrossSection::constant(1.0);
    const TransferSampler sampler(pp, xs, StructureFactorForm::maxwell_boltzmann, 3.0);
    auto rng = make_stream(5, 2);
    SamplerStats stats;
    const int n = 20000;
    std::vector<double> phi(n);
    for (auto& v : phi) {
        const auto q = sampler.sample_transfer({0, 0, 1.5}, rng, stats);
        v = (std::atan2(q.y, q.x) + pi) / (2 * pi);
    }
    std::sort(phi.begin(), phi.end());
    double d = 0;
    for (int i = 0; i < n; ++i) d = std::max({d, phi[i] - double(i) / n, double(i + 1) / n - phi[i]});
    CHECK(d < 1.628 / std::sqrt(double(n)));
}

TEST_CASE("radial transfer histogram matches quadrature (chi-square)") {
    const PhysicalParams pp;
    const auto xs = CrossSection::gaussian(1.0, 1.0);
    const double pz = 1.2;
    const TransferSampler sampler(pp, xs, StructureFactorForm::maxwell_boltzmann, 3.0);
    const int bins = 30;
    const double qmax = 0.6 * transfer_extent(pz, pp, StructureFactorForm::maxwell_boltzmann);
    const double full = transfer_extent(pz, pp, StructureFactorForm::maxwell_boltzmann);
    std::vector<double> prob(bins);
    const double total = simpson([&](double q) { return radial_density(q, pz, pp, xs); }, 0, full, 600);
    for (int b = 0; b < bins; ++b) {
        const double lo = qmax * b / bins, hi = b + 1 == bins ? full : qmax * (b + 1) / bins;
        prob[b] = simpson([&](double q) { return radial_density(q, pz, pp, xs); }, lo, hi, 40) / total;
    }
    auto rng = make_stream(9, 3);
    SamplerStats stats;
    const int n = 50000;
    std::vector<double> count(bins, 0.0);
    for (int i = 0; i < n; ++i) {
        const double q = norm(sampler.sample_transfer({0, 0, pz}, rng, stats));
        count[std::min(bins - 1, int(q / qmax * bins))] += 1;
    }
    double chi2 = 0;
    for (int b = 0; b < bins; ++b) chi2 += std::pow(count[b] - n * prob[b], 2) / (n * prob[b]);
    CHECK(chi2 < 49.59);  // 1% critical value, 29 degrees of freedom
}

TEST_CASE("free flight without collisions") {
    const PhysicalParams pp;
    EnsembleConfig cfg;
    cfg.n_trajectories = 1;
    cfg.t_end = 3.0;
    cfg.dt_record = 1.0;
    cfg.init = {InitialKind::delta, {0.5, -1.0, 2.0}, {1.0, 2.0, 3.0}};
    const auto res = evolve_ensemble(cfg, pp, CrossSection::constant(0.0));
    REQUIRE(res.final_states.size() == 1);
    const auto& s = res.final_states[0];
    CHECK(s.x.x == doctest::Approx(1.0 + 0.5 * 3.0));
    CHECK(s.x.y == doctest::Approx(2.0 - 1.0 * 3.0));
    CHECK(s.x.z == doctest::Approx(3.0 + 2.0 * 3.0));
    CHECK(res.collisions == 0);
    CHECK(res.stats.t.size() == 4);
}

TEST_CASE("equilibrium ensemble stays Maxwellian with zero drift") {
    const PhysicalParams pp;
    const auto xs = CrossSection::constant(1.0);
    EnsembleConfig cfg;
    cfg.n_trajectories = 4000;
    cfg.t_end = 20.0;
    cfg.dt_record = 5.0;
    cfg.init = {InitialKind::maxwell, {}, {}};
    cfg.seed = 99;
    const auto res = evolve_ensemble(cfg, pp, xs);
    for (std::size_t k = 0; k < res.stats.t.size(); ++k) {
        CHECK(std::abs(res.stats.mean_p[k].x) < 3 * res.stats.se_p[k].x);
        CHECK(std::abs(res.stats.mean_p[k].z) < 3 * res.stats.se_p[k].z);
    }
    double m2 = 0, m4 = 0;
    for (const auto& s : res.final_states) {
        m2 += s.p.z * s.p.z;
        m4 += std::pow(s.p.z, 4);
    }
    const double n = double(res.final_states.size());
    m2 /= n;
    m4 /= n;
    const double se_var = std::sqrt((m4 - m2 * m2) / n);
    CHECK(std::abs(m2 - pp.thermal_momentum_sq()) < 3 * se_var);
    CHECK(m4 / (m2 * m2) == doctest::Approx(3.0).epsilon(0.1));
}

TEST_CASE("ensemble is deterministic and independent of thread count") {
    const PhysicalParams pp;
    const auto xs = CrossSection::constant(1.0);
    EnsembleConfig cfg;
    cfg.n_trajectories = 300;
    cfg.t_end = 5.0;
    cfg.dt_record = 1.0;
    cfg.init = {InitialKind::delta, {0, 0, 2}, {}};
    cfg.seed = 17;
    auto csv = [&](unsigned threads) {
        cfg.threads = threads;
        std::ostringstream os;
        write_csv(os, evolve_ensemble(cfg, pp, xs).stats);
        return os.str();
    };
    const auto a = csv(1);
    CHECK(a == csv(1));
    CHECK(a == csv(3));
    CHECK(a.rfind("t,mean_px,mean_py,mean_pz,mean_p2,mean_x2,se_p2,n_samples\n", 0) == 0);
}

TEST_CASE("exponential fit recovers a known rate") {
    std::vector<double> t, y, se;
    for (int k = 0; k <= 20; ++k) {
        t.push_back(0.5 * k);
        y.push_back(3.0 * std::exp(-0.4 * t.back()));
        se.push_back(0.05);
    }
    const auto fit = fit_exponential_decay(t, y, se);
    CHECK(fit.rate == doctest::Approx(0.4).epsilon(1e-10));
    CHECK(fit.amplitude == doctest::Approx(3.0).epsilon(1e-10));
    // Points below three standard errors are dropped.
    CHECK(fit.points_used < t.size());
}
