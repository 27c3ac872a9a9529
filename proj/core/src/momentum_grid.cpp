#include "kinlab/momentum_grid.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "kinlab/errors.hpp"

namespace kinlab::qm {

using cplx = std::complex<double>;

std::vector<double> lattice_maxwell(const MomentumLattice& lattice, const PhysicalParams& pp) {
    std::vector<double> w(lattice.n);
    double s = 0.0;
    for (std::size_t i = 0; i < lattice.n; ++i) {
        const double p = lattice.p(i);
        w[i] = std::exp(-pp.inv_temperature * p * p / (2.0 * pp.test_mass));
        s += w[i];
    }
    for (double& v : w) v /= s * lattice.dp;
    return w;
}

MomentumGridDensityMatrix MomentumGridDensityMatrix::from_diagonal(const MomentumLattice& lattice,
                                                                   std::span<const double> diagonal) {
    if (diagonal.size() != lattice.n) throw std::invalid_argument("diagonal length does not match the lattice");
    MomentumGridDensityMatrix out{lattice, Eigen::MatrixXcd::Zero(lattice.n, lattice.n), 0.0};
    for (std::size_t i = 0; i < lattice.n; ++i) out.rho(i, i) = diagonal[i];
    return out;
}

MomentumGridDensityMatrix MomentumGridDensityMatrix::from_wavefunction(const MomentumLattice& lattice,
                                                                       std::span<const cplx> psi) {
    if (psi.size() != lattice.n) throw std::invalid_argument("wavefunction length does not match the lattice");
    Eigen::VectorXcd v(lattice.n);
    for (std::size_t i = 0; i < lattice.n; ++i) v(i) = psi[i];
    const double norm_sq = v.squaredNorm() * lattice.dp;
    if (!(norm_sq > 0.0)) throw std::invalid_argument("wavefunction must be nonzero");
    v /= std::sqrt(norm_sq);
    return {lattice, v * v.adjoint(), 0.0};
}

MomentumGridDensityMatrix MomentumGridDensityMatrix::thermal(const MomentumLattice& lattice,
                                                             const PhysicalParams& params) {
    const auto w = lattice_maxwell(lattice, params);
    return from_diagonal(lattice, w);
}

double MomentumGridDensityMatrix::trace() const { return rho.diagonal().real().sum() * lattice.dp; }

double MomentumGridDensityMatrix::hermiticity_error() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }

Eigen::VectorXd MomentumGridDensityMatrix::eigenvalues() const {
    const Eigen::MatrixXcd h = 0.5 * (rho + rho.adjoint()) * lattice.dp;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

double MomentumGridDensityMatrix::offdiag_l2() const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < rho.rows(); ++i)
        for (Eigen::Index j = 0; j < rho.cols(); ++j)
            if (i != j) s += std::norm(rho(i, j));
    return std::sqrt(s) * lattice.dp;
}

std::vector<double> MomentumGridDensityMatrix::diagonal() const {
    std::vector<double> d(lattice.n);
    for (std::size_t i = 0; i < lattice.n; ++i) d[i] = rho(i, i).real();
    return d;
}

void MomentumGridDensityMatrix::validate() const {
    const auto n = static_cast<Eigen::Index>(lattice.n);
    if (lattice.n < 2 || !(lattice.dp > 0.0)) throw std::invalid_argument("momentum lattice needs n >= 2, dp > 0");
    if (rho.rows() != n || rho.cols() != n) throw std::invalid_argument("density matrix shape does not match lattice");
    const double scale = std::max(1.0, rho.cwiseAbs().maxCoeff());
    if (hermiticity_error() > 1e-12 * scale) throw std::invalid_argument("density matrix is not Hermitian");
    if (std::abs(trace() - 1.0) > 1e-8) throw std::invalid_argument("density matrix trace must be 1");
    const auto ev = eigenvalues();
    if (ev(0) < -1e-10 * std::max(ev(n - 1), 1e-300))
        throw std::invalid_argument("density matrix is not positive semidefinite");
}

NonAbelianGenerator::NonAbelianGenerator(const MomentumLattice& lattice, const PhysicalParams& pp,
                                         const CrossSection& xs, StructureFactorForm form)
    : lattice_(lattice), params_(pp), max_shift_(static_cast<int>(lattice.n) - 1) {
    pp.validate();
    const std::size_t n = lattice.n;
    const double M = pp.test_mass;
    rate_.assign(2 * max_shift_ + 1, std::vector<double>(n, 0.0));
    amp_.assign(2 * max_shift_ + 1, std::vector<double>(n, 0.0));
    loss_.assign(n, 0.0);
    energy_.resize(n);
    for (std::size_t i = 0; i < n; ++i) energy_[i] = lattice.p(i) * lattice.p(i) / (2.0 * M);

    for (int s = -max_shift_; s <= max_shift_; ++s) {
        if (s == 0) continue;
        const double q = static_cast<double>(s) * lattice.dp;
        const double weight = pp.density / (M * M) * lattice.dp * xs(std::abs(q));
        if (weight == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const auto target = static_cast<long>(i) + s;
            if (target < 0 || target >= static_cast<long>(n)) continue;
            const double e = energy_transfer_1d(q, lattice.p(i), pp);
            const double r = weight * structure_factor(form, std::abs(q), e, pp);
            rate_[s + max_shift_][i] = r;
            amp_[s + max_shift_][i] = std::sqrt(r);
            loss_[i] += r;
        }
    }
}

double NonAbelianGenerator::jump_rate(int s, std::size_t i) const {
    if (s == 0 || std::abs(s) > max_shift_) return 0.0;
    return rate_[s + max_shift_][i];
}

double NonAbelianGenerator::max_loss_rate() const { return *std::max_element(loss_.begin(), loss_.end()); }

Eigen::MatrixXd NonAbelianGenerator::classical_rate_matrix() const {
    const auto n = static_cast<Eigen::Index>(lattice_.n);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (int s = -max_shift_; s <= max_shift_; ++s) {
        if (s == 0) continue;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double r = rate_[s + max_shift_][static_cast<std::size_t>(i)];
            if (r == 0.0) continue;
            w(i + s, i) += r;
            w(i, i) -= r;
        }
    }
    return w;
}

Eigen::MatrixXcd NonAbelianGenerator::dissipator(const Eigen::MatrixXcd& rho) const {
    const auto n = static_cast<Eigen::Index>(lattice_.n);
    Eigen::MatrixXcd out(n, n);
    for (Eigen::Index b = 0; b < n; ++b)
        for (Eigen::Index a = 0; a < n; ++a)
            out(a, b) = -0.5 * (loss_[static_cast<std::size_t>(a)] + loss_[static_cast<std::size_t>(b)]) * rho(a, b);

    // Jump term: out(a, b) += amp_s(a-s) amp_s(b-s) rho(a-s, b-s).
    for (int s = -max_shift_; s <= max_shift_; ++s) {
        if (s == 0) continue;
        const auto& amp = amp_[s + max_shift_];
        const Eigen::Index lo = std::max<Eigen::Index>(0, s);
        const Eigen::Index hi = std::min<Eigen::Index>(n, n + s);
        for (Eigen::Index b = lo; b < hi; ++b) {
            const double ab = amp[static_cast<std::size_t>(b - s)];
            if (ab == 0.0) continue;
            for (Eigen::Index a = lo; a < hi; ++a) {
                const double aa = amp[static_cast<std::size_t>(a - s)];
                out(a, b) += aa * ab * rho(a - s, b - s);
            }
        }
    }
    return out;
}

Eigen::MatrixXcd NonAbelianGenerator::apply(const Eigen::MatrixXcd& rho) const {
    Eigen::MatrixXcd out = dissipator(rho);
    const auto n = static_cast<Eigen::Index>(lattice_.n);
    const cplx minus_i_over_hbar(0.0, -1.0 / params_.hbar);
    for (Eigen::Index b = 0; b < n; ++b)
        for (Eigen::Index a = 0; a < n; ++a)
            out(a, b) += minus_i_over_hbar *
                         (energy_[static_cast<std::size_t>(a)] - energy_[static_cast<std::size_t>(b)]) * rho(a, b);
    return out;
}

void NonAbelianGenerator::kinetic_phase(Eigen::MatrixXcd& rho, double h) const {
    const auto n = static_cast<Eigen::Index>(lattice_.n);
    for (Eigen::Index b = 0; b < n; ++b)
        for (Eigen::Index a = 0; a < n; ++a) {
            const double phase =
                -(energy_[static_cast<std::size_t>(a)] - energy_[static_cast<std::size_t>(b)]) * h / params_.hbar;
            rho(a, b) *= cplx(std::cos(phase), std::sin(phase));
        }
}

GridDiagnostics diagnose(const MomentumGridDensityMatrix& state, const PhysicalParams& params) {
    GridDiagnostics d;
    d.t = state.t;
    d.trace = state.trace();
    d.leakage = 1.0 - d.trace;
    d.min_eig = state.eigenvalues()(0);
    d.offdiag_l2 = state.offdiag_l2();
    const auto maxwell = lattice_maxwell(state.lattice, params);
    double l1 = 0.0;
    for (std::size_t i = 0; i < state.lattice.n; ++i) l1 += std::abs(state.rho(i, i).real() - maxwell[i]);
    d.diag_l1_dist_to_maxwell = l1 * state.lattice.dp;
    return d;
}

GridEvolveResult nonabelian_grid_evolve(const MomentumGridDensityMatrix& rho0, double t_end, double dt,
                                        const PhysicalParams& pp, const CrossSection& xs,
                                        const GridEvolveOptions& options) {
    pp.validate_quantum();
    rho0.validate();
    if (!(t_end >= 0.0)) throw std::invalid_argument("grid evolution needs t_end >= 0");
    if (!(dt > 0.0)) throw std::invalid_argument("grid evolution needs dt > 0");

    const NonAbelianGenerator gen(rho0.lattice, pp, xs, options.form);
    const double stable = 1.0 / std::max(gen.max_loss_rate(), 1e-300);
    if (dt > stable) throw StabilityError("grid master-equation step exceeds 1 / max loss rate", stable);

    GridEvolveResult out;
    out.state = rho0;
    auto record = [&] {
        const auto d = diagnose(out.state, pp);
        const auto ev = out.state.eigenvalues();
        if (d.min_eig < -options.positivity_tol * ev(ev.size() - 1))
            throw PositivityError("density matrix lost positivity at t = " + std::to_string(out.state.t) +
                                  " (smallest eigenvalue " + std::to_string(d.min_eig) + ")");
        out.diagnostics.push_back(d);
    };
    record();
    if (t_end == 0.0) return out;

    out.steps = static_cast<std::size_t>(std::max(1.0, std::ceil(t_end / dt * (1.0 - 1e-12))));
    out.dt = t_end / static_cast<double>(out.steps);
    const std::size_t stride =
        options.record_interval > 0.0
            ? std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(options.record_interval / out.dt)))
            : out.steps;

    const double h = out.dt;
    Eigen::MatrixXcd& rho = out.state.rho;
    const double t0 = rho0.t;
    for (std::size_t n = 1; n <= out.steps; ++n) {
        gen.kinetic_phase(rho, 0.5 * h);
        const Eigen::MatrixXcd k1 = gen.dissipator(rho);
        const Eigen::MatrixXcd k2 = gen.dissipator(rho + 0.5 * h * k1);
        const Eigen::MatrixXcd k3 = gen.dissipator(rho + 0.5 * h * k2);
        const Eigen::MatrixXcd k4 = gen.dissipator(rho + h * k3);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        gen.kinetic_phase(rho, 0.5 * h);
        out.state.t = t0 + static_cast<double>(n) * h;
        if (n % stride == 0 || n == out.steps) record();
    }
    return out;
}

void write_csv(std::ostream& os, const std::vector<GridDiagnostics>& diagnostics) {
    os << "t,trace,min_eig,offdiag_l2,diag_l1_dist_to_maxwell\n" << std::setprecision(17);
    for (const auto& d : diagnostics)
        os << d.t << ',' << d.trace << ',' << d.min_eig << ',' << d.offdiag_l2 << ',' << d.diag_l1_dist_to_maxwell
           << '\n';
}

PhaseSpaceField wigner_transform(const MomentumGridDensityMatrix& state, std::size_t n_x, const PhysicalParams& pp) {
    if (pp.hbar == 0.0) throw DomainError("Wigner transform needs hbar > 0");
    const std::size_t n = state.lattice.n;
    if (n_x < 2 * n - 1)
        throw std::invalid_argument("Wigner transform: " + std::to_string(n_x) + " x-nodes cannot resolve the " +
                                    std::to_string(2 * n - 1) + " momentum-offset harmonics");
    const double scale = std::max(1.0, state.rho.cwiseAbs().maxCoeff());
    if (state.hermiticity_error() > 1e-12 * scale) throw std::invalid_argument("Wigner transform needs Hermitian rho");

    const double dp = state.lattice.dp;
    const double period = std::numbers::pi * pp.hbar / dp;
    PhaseSpaceGrid grid{-0.5 * period, 0.5 * period, n_x, state.lattice.p_max(), n};
    PhaseSpaceField field(grid, state.t);
    const double norm = dp / (std::numbers::pi * pp.hbar);
    for (std::size_t m = 0; m < n; ++m) {
        const auto mi = static_cast<long>(m);
        const long s_max = std::min(mi, static_cast<long>(n) - 1 - mi);
        for (std::size_t i = 0; i < n_x; ++i) {
            const double x = grid.x(i);
            double acc = state.rho(m, m).real();
            for (long s = 1; s <= s_max; ++s) {
                const double theta = 2.0 * static_cast<double>(s) * dp * x / pp.hbar;
                // s and -s terms combine into twice the real part.
                acc += 2.0 * (cplx(std::cos(theta), std::sin(theta)) * state.rho(mi + s, mi - s)).real();
            }
            field(i, m) = norm * acc;
        }
    }
    return field;
}

}  // namespace kinlab::qm
