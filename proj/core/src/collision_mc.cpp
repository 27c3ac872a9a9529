#include "kinlab/collision_mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "kinlab/errors.hpp"
#include "kinlab/quadrature.hpp"

namespace kinlab::mc {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr std::size_t chunk_size = 64;

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double exponential(Rng& rng, double rate) { return -std::log1p(-uniform01(rng)) / rate; }

Vec3 isotropic_unit(Rng& rng) {
    const double c = 2.0 * uniform01(rng) - 1.0;
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    const double phi = two_pi * uniform01(rng);
    return {s * std::cos(phi), s * std::sin(phi), c};
}

double rate_prefactor(const PhysicalParams& pp) {
    const double M = pp.test_mass;
    return pp.density / (M * M) * std::sqrt(pp.inv_temperature * pp.gas_mass / two_pi);
}

}  // namespace

Rng make_stream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0x6b696eu};
    return Rng(seq);
}

double transfer_extent(double p_mod, const PhysicalParams& pp, StructureFactorForm form) {
    const double alpha = pp.mass_ratio();
    const double beta = pp.inv_temperature;
    const double m = pp.gas_mass;
    if (form == StructureFactorForm::maxwell_boltzmann)
        return (2.0 * alpha * p_mod + 10.0 * std::sqrt(8.0 * m / beta)) / (1.0 + alpha);
    const double a = beta / (8.0 * m) * (1.0 + 2.0 * alpha);
    const double b = beta * p_mod / (2.0 * pp.test_mass);
    return b / a + 10.0 / std::sqrt(a);
}

double total_rate(const MomentumVector& p, const PhysicalParams& pp, const CrossSection& xs, StructureFactorForm form,
                  double rel_tol) {
    pp.validate();
    if (xs.is_zero()) return 0.0;
    const double p_mod = norm(p);
    const double q_max = transfer_extent(p_mod, pp, form);

    // Azimuthal symmetry about p: d^3q -> 2 pi q^2 dq d(cos theta).
    const auto angular = [&](double q) {
        if (q == 0.0) return 0.0;
        const auto integrand = [&](double u) {
            const double energy = q * q / (2.0 * pp.test_mass) + p_mod * q * u / pp.test_mass;
            // q^2 S(q,E) with the 1/q of the prefactor cancelled analytically
            return q * std::exp(log_structure_factor(form, q, energy, pp) + std::log(q));
        };
        return xs(q) * integrate_adaptive(integrand, -1.0, 1.0, 0.01 * rel_tol, {}, 1e-300).value;
    };
    const auto kinks = xs.breakpoints(0.0, q_max);
    const double radial = integrate_adaptive(angular, 0.0, q_max, rel_tol, kinks).value;
    const double M = pp.test_mass;
    return pp.density / (M * M) * two_pi * radial;
}

TransferSampler::TransferSampler(PhysicalParams params, CrossSection xs, StructureFactorForm form, double p_cap,
                                 std::size_t table_cells)
    : params_(params), xs_(std::move(xs)), form_(form), cells_(table_cells) {
    params_.validate();
    if (cells_ < 16) throw std::invalid_argument("transfer sampler needs at least 16 table cells");
    bin_width_ = 0.25 * std::sqrt(params_.thermal_momentum_sq());
    rate_prefactor_ = rate_prefactor(params_) * 4.0 * std::numbers::pi;
    const auto bins = static_cast<std::size_t>(std::ceil(std::max(p_cap, bin_width_) / bin_width_));
    tables_.reserve(bins);
    for (std::size_t k = 0; k < bins; ++k) tables_.push_back(build_table(static_cast<double>(k + 1) * bin_width_));
}

double TransferSampler::log_kernel(double q, double p_along_q) const {
    const double beta = params_.inv_temperature;
    const double m = params_.gas_mass;
    const double alpha = params_.mass_ratio();
    if (form_ == StructureFactorForm::maxwell_boltzmann) {
        const double a = (1.0 + alpha) * q + 2.0 * alpha * p_along_q;
        return -beta / (8.0 * m) * a * a;
    }
    return -beta / (8.0 * m) * (1.0 + 2.0 * alpha) * q * q - 0.5 * beta * q * p_along_q / params_.test_mass;
}

double TransferSampler::log_envelope(double q, double p_bound) const {
    const double beta = params_.inv_temperature;
    const double m = params_.gas_mass;
    const double alpha = params_.mass_ratio();
    if (form_ == StructureFactorForm::maxwell_boltzmann) {
        const double a = std::max(0.0, (1.0 + alpha) * q - 2.0 * alpha * p_bound);
        return -beta / (8.0 * m) * a * a;
    }
    return -beta / (8.0 * m) * (1.0 + 2.0 * alpha) * q * q + 0.5 * beta * q * p_bound / params_.test_mass;
}

double TransferSampler::envelope_peak(double p_bound) const {
    const double beta = params_.inv_temperature;
    const double alpha = params_.mass_ratio();
    if (form_ == StructureFactorForm::maxwell_boltzmann) return 2.0 * alpha * p_bound / (1.0 + alpha);
    const double a = beta / (8.0 * params_.gas_mass) * (1.0 + 2.0 * alpha);
    return beta * p_bound / (2.0 * params_.test_mass) / (2.0 * a);
}

TransferSampler::RadialTable TransferSampler::build_table(double p_bound) const {
    RadialTable table;
    table.p_bound = p_bound;
    const double q_max = transfer_extent(p_bound, params_, form_);
    table.cell = q_max / static_cast<double>(cells_);
    table.cumulative.assign(cells_ + 1, 0.0);
    table.height.assign(cells_, 0.0);
    const double peak = envelope_peak(p_bound);
    for (std::size_t i = 0; i < cells_; ++i) {
        const double lo = static_cast<double>(i) * table.cell;
        const double hi = static_cast<double>(i + 1) * table.cell;
        // The log-envelope is concave in q, so its maximum on [lo, hi] sits at
        // the clamped peak; q itself is bounded by hi.
        const double env = log_envelope(std::clamp(peak, lo, hi), p_bound);
        table.height[i] = hi * xs_.upper_bound(lo, hi) * std::exp(env);
        table.cumulative[i + 1] = table.cumulative[i] + table.height[i] * table.cell;
    }
    table.rate = rate_prefactor_ * table.cumulative.back();
    return table;
}

const TransferSampler::RadialTable& TransferSampler::table_for(double p_mod, RadialTable& scratch) const {
    const auto bin = static_cast<std::size_t>(p_mod / bin_width_);
    if (bin < tables_.size()) return tables_[bin];
    scratch = build_table(static_cast<double>(bin + 1) * bin_width_);
    return scratch;
}

double TransferSampler::majorant_rate(const MomentumVector& p) const {
    RadialTable scratch;
    return table_for(norm(p), scratch).rate;
}

TransferSampler::Proposal TransferSampler::propose(const MomentumVector& p, Rng& rng, SamplerStats& stats) const {
    RadialTable scratch;
    const RadialTable& table = table_for(norm(p), scratch);
    ++stats.proposals;
    if (table.rate == 0.0) return {};

    const double target = uniform01(rng) * table.cumulative.back();
    auto it = std::upper_bound(table.cumulative.begin() + 1, table.cumulative.end(), target);
    const auto cell = std::min<std::size_t>(static_cast<std::size_t>(it - table.cumulative.begin()) - 1, cells_ - 1);
    const double q_mod = (static_cast<double>(cell) + uniform01(rng)) * table.cell;
    const Vec3 dir = isotropic_unit(rng);
    const TransferVector q = dir * q_mod;

    const double height = table.height[cell];
    if (height == 0.0 || q_mod == 0.0) return {q, false};
    const double density = q_mod * xs_(q_mod) * std::exp(log_kernel(q_mod, dot(p, dir)));
    const double ratio = density / height;
    if (ratio > 1.0 + 1e-9)
        throw EnvelopeViolation("transfer sampler envelope below target density (ratio " + std::to_string(ratio) + ")");
    const bool accepted = uniform01(rng) < ratio;
    if (accepted) ++stats.acceptances;
    return {q, accepted};
}

TransferVector TransferSampler::sample_transfer(const MomentumVector& p, Rng& rng, SamplerStats& stats) const {
    if (majorant_rate(p) == 0.0) throw DomainError("sample_transfer requires a positive collision rate");
    for (;;) {
        const auto proposal = propose(p, rng, stats);
        if (proposal.accepted) return proposal.q;
    }
}

double TransferSampler::sample_waiting_time(const MomentumVector& p, Rng& rng, SamplerStats& stats) const {
    const double rate = majorant_rate(p);
    if (rate == 0.0) return std::numeric_limits<double>::infinity();
    double elapsed = 0.0;
    for (;;) {
        elapsed += exponential(rng, rate);
        if (propose(p, rng, stats).accepted) return elapsed;
    }
}

namespace {

struct RecordSums {
    Vec3 p;
    Vec3 p_sq;
    double p2 = 0.0;
    double p2_sq = 0.0;
    Vec3 x;
    double x2 = 0.0;
    double x2_sq = 0.0;

    void add(const Vec3& xv, const Vec3& pv) {
        p += pv;
        p_sq += Vec3{pv.x * pv.x, pv.y * pv.y, pv.z * pv.z};
        const double pp = norm_sq(pv);
        p2 += pp;
        p2_sq += pp * pp;
        x += xv;
        const double xx = norm_sq(xv);
        x2 += xx;
        x2_sq += xx * xx;
    }
    RecordSums& operator+=(const RecordSums& o) {
        p += o.p;
        p_sq += o.p_sq;
        p2 += o.p2;
        p2_sq += o.p2_sq;
        x += o.x;
        x2 += o.x2;
        x2_sq += o.x2_sq;
        return *this;
    }
};

struct ChunkResult {
    std::vector<RecordSums> sums;
    std::vector<TrajectoryState> finals;
    SamplerStats sampler;
    std::uint64_t collisions = 0;
};

MomentumVector initial_momentum(const InitialDistribution& init, const PhysicalParams& pp, Rng& rng) {
    if (init.kind == InitialKind::delta) return init.p0;
    std::normal_distribution<double> normal(0.0, std::sqrt(pp.thermal_momentum_sq()));
    MomentumVector p{normal(rng), normal(rng), normal(rng)};
    if (init.kind == InitialKind::shifted_maxwell) p += init.p0;
    return p;
}

double standard_error(double sum, double sum_sq, std::size_t n) {
    if (n < 2) return 0.0;
    const double nn = static_cast<double>(n);
    const double mean = sum / nn;
    const double var = std::max(0.0, (sum_sq - nn * mean * mean) / (nn - 1.0));
    return std::sqrt(var / nn);
}

}  // namespace

EnsembleResult evolve_ensemble(const EnsembleConfig& cfg, const PhysicalParams& pp, const CrossSection& xs) {
    pp.validate();
    if (cfg.n_trajectories < 1) throw std::invalid_argument("ensemble needs at least one trajectory");
    if (!(cfg.t_end > 0.0)) throw std::invalid_argument("ensemble t_end must be > 0");
    if (!(cfg.dt_record > 0.0)) throw std::invalid_argument("ensemble dt_record must be > 0");
    if (!is_finite(cfg.init.p0) || !is_finite(cfg.init.x0))
        throw std::invalid_argument("ensemble initial state must be finite");

    const std::size_t n_records = static_cast<std::size_t>(std::floor(cfg.t_end / cfg.dt_record * (1.0 + 1e-12))) + 1;
    std::vector<double> record_t(n_records);
    for (std::size_t k = 0; k < n_records; ++k) record_t[k] = static_cast<double>(k) * cfg.dt_record;

    const double thermal = std::sqrt(pp.thermal_momentum_sq());
    const double p_cap = norm(cfg.init.p0) + 10.0 * thermal;
    const TransferSampler sampler(pp, xs, cfg.form, p_cap);
    const double inv_mass = 1.0 / pp.test_mass;

    const std::size_t n_chunks = (cfg.n_trajectories + chunk_size - 1) / chunk_size;
    std::vector<ChunkResult> chunks(n_chunks);

    auto run_chunk = [&](std::size_t c) {
        ChunkResult& out = chunks[c];
        out.sums.assign(n_records, RecordSums{});
        const std::size_t begin = c * chunk_size;
        const std::size_t end = std::min(cfg.n_trajectories, begin + chunk_size);
        for (std::size_t traj = begin; traj < end; ++traj) {
            Rng rng = make_stream(cfg.seed, traj);
            Vec3 x = cfg.init.x0;
            MomentumVector p = initial_momentum(cfg.init, pp, rng);
            double t = 0.0;
            std::size_t next_record = 0;
            for (;;) {
                const double rate = sampler.majorant_rate(p);
                const double t_next =
                    rate > 0.0 ? t + exponential(rng, rate) : std::numeric_limits<double>::infinity();
                while (next_record < n_records && record_t[next_record] <= t_next) {
                    out.sums[next_record].add(x + p * (inv_mass * (record_t[next_record] - t)), p);
                    ++next_record;
                }
                if (t_next > cfg.t_end) {
                    if (cfg.keep_final_states) out.finals.push_back({x + p * (inv_mass * (cfg.t_end - t)), p, cfg.t_end});
                    break;
                }
                x += p * (inv_mass * (t_next - t));
                t = t_next;
                const auto proposal = sampler.propose(p, rng, out.sampler);
                if (proposal.accepted) {
                    p += proposal.q;
                    ++out.collisions;
                }
            }
        }
    };

    const unsigned threads = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(n_chunks)));
    std::atomic<std::size_t> next_chunk{0};
    auto worker = [&] {
        for (std::size_t c = next_chunk++; c < n_chunks; c = next_chunk++) run_chunk(c);
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    }

    // Deterministic reduction in chunk order.
    EnsembleResult result;
    std::vector<RecordSums> total(n_records);
    for (auto& chunk : chunks) {
        for (std::size_t k = 0; k < n_records; ++k) total[k] += chunk.sums[k];
        result.sampler += chunk.sampler;
        result.collisions += chunk.collisions;
        if (cfg.keep_final_states)
            result.final_states.insert(result.final_states.end(), chunk.finals.begin(), chunk.finals.end());
    }

    const std::size_t n = cfg.n_trajectories;
    const double inv_n = 1.0 / static_cast<double>(n);
    EnsembleStats& s = result.stats;
    s.n_samples = n;
    s.t = record_t;
    for (const auto& r : total) {
        s.mean_p.push_back(r.p * inv_n);
        s.mean_p2.push_back(r.p2 * inv_n);
        s.mean_x.push_back(r.x * inv_n);
        s.mean_x2.push_back(r.x2 * inv_n);
        s.se_p.push_back({standard_error(r.p.x, r.p_sq.x, n), standard_error(r.p.y, r.p_sq.y, n),
                          standard_error(r.p.z, r.p_sq.z, n)});
        s.se_p2.push_back(standard_error(r.p2, r.p2_sq, n));
        s.se_x2.push_back(standard_error(r.x2, r.x2_sq, n));
    }
    if (result.sampler.proposals > 0 && result.sampler.acceptance_rate() < low_acceptance_threshold)
        result.warnings.push_back("transfer sampler acceptance rate " +
                                  std::to_string(result.sampler.acceptance_rate()) + " is below 1e-3");
    return result;
}

void write_csv(std::ostream& os, const EnsembleStats& s) {
    os << "t,mean_px,mean_py,mean_pz,mean_p2,mean_x2,se_p2,n_samples\n";
    os << std::setprecision(17);
    for (std::size_t k = 0; k < s.t.size(); ++k) {
        os << s.t[k] << ',' << s.mean_p[k].x << ',' << s.mean_p[k].y << ',' << s.mean_p[k].z << ',' << s.mean_p2[k]
           << ',' << s.mean_x2[k] << ',' << s.se_p2[k] << ',' << s.n_samples << '\n';
    }
}

RateFit fit_exponential_decay(std::span<const double> t, std::span<const double> y, std::span<const double> se,
                              double min_snr) {
    if (t.size() != y.size() || t.size() != se.size())
        throw std::invalid_argument("fit_exponential_decay: mismatched series lengths");
    double sw = 0.0, st = 0.0, sz = 0.0, stt = 0.0, stz = 0.0;
    RateFit fit;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (se[i] == 0.0) continue;  // deterministic points carry no noise model
        if (!(y[i] > min_snr * se[i])) break;
        const double z = std::log(y[i]);
        const double sigma_z = se[i] / y[i];
        const double w = 1.0 / (sigma_z * sigma_z);
        sw += w;
        st += w * t[i];
        sz += w * z;
        stt += w * t[i] * t[i];
        stz += w * t[i] * z;
        ++fit.points_used;
    }
    if (fit.points_used < 2) throw std::invalid_argument("fit_exponential_decay: fewer than two usable points");
    const double det = sw * stt - st * st;
    const double slope = (sw * stz - st * sz) / det;
    const double intercept = (stt * sz - st * stz) / det;
    fit.rate = -slope;
    fit.rate_se = std::sqrt(sw / det);
    fit.amplitude = std::exp(intercept);
    return fit;
}

}  // namespace kinlab::mc
