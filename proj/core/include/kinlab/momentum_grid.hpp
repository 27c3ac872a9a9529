#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "kinlab/cross_section.hpp"
#include "kinlab/phase_space.hpp"
#include "kinlab/physical_params.hpp"
#include "kinlab/structure_factor.hpp"

namespace kinlab::qm {

/// Symmetric uniform momentum lattice p_i = (i - (n-1)/2) dp.
struct MomentumLattice {
    std::size_t n = 8;
    double dp = 1.0;

    double p(std::size_t i) const noexcept { return (static_cast<double>(i) - 0.5 * static_cast<double>(n - 1)) * dp; }
    double p_max() const noexcept { return 0.5 * static_cast<double>(n) * dp; }
};

/// Statistical operator in the momentum representation, rho(p_i, p_j), with
/// continuum normalisation sum_i rho_ii dp = 1.
struct MomentumGridDensityMatrix {
    MomentumLattice lattice;
    Eigen::MatrixXcd rho;
    double t = 0.0;

    static MomentumGridDensityMatrix from_diagonal(const MomentumLattice& lattice, std::span<const double> diagonal);
    /// Pure state |psi><psi| from amplitudes psi_i (normalised here).
    static MomentumGridDensityMatrix from_wavefunction(const MomentumLattice& lattice,
                                                       std::span<const std::complex<double>> psi);
    /// Diagonal grid Maxwellian.
    static MomentumGridDensityMatrix thermal(const MomentumLattice& lattice, const PhysicalParams& params);

    double trace() const;
    /// max |rho_ij - conj(rho_ji)|
    double hermiticity_error() const;
    /// Eigenvalues of the Hermitian part, ascending, in units where the trace is 1.
    Eigen::VectorXd eigenvalues() const;
    /// Hilbert-Schmidt norm of the off-diagonal part, sqrt(sum_{i != j} |rho_ij|^2) dp.
    double offdiag_l2() const;
    std::vector<double> diagonal() const;

    /// Checks shape, Hermiticity (1e-12), unit trace (1e-8) and positivity.
    void validate() const;
};

/// exp(-beta p_i^2 / 2M) on the lattice, normalised to sum dp = 1.
std::vector<double> lattice_maxwell(const MomentumLattice& lattice, const PhysicalParams& params);

/// Collision-lattice discretisation of the non-Abelian linear Boltzmann
/// generator: transfers q = s dp, s != 0, with weight (n/M^2) dp Sigma(|q|) and
/// the one-dimensional structure factor. Transfers that would leave the
/// lattice are dropped from both the jump and the anticommutator term, which
/// keeps a Lindblad structure and an exact trace.
class NonAbelianGenerator {
public:
    NonAbelianGenerator(const MomentumLattice& lattice, const PhysicalParams& params, const CrossSection& xs,
                        StructureFactorForm form = StructureFactorForm::maxwell_boltzmann);

    /// Rate of the jump p_i -> p_{i+s}; zero when i + s leaves the lattice.
    double jump_rate(int s, std::size_t i) const;
    /// Total loss rate out of p_i.
    double loss_rate(std::size_t i) const { return loss_[i]; }
    double max_loss_rate() const;

    /// Classical master-equation matrix W with dP/dt = W P on the diagonal.
    Eigen::MatrixXd classical_rate_matrix() const;

    /// Dissipative part of the generator applied to rho.
    Eigen::MatrixXcd dissipator(const Eigen::MatrixXcd& rho) const;
    /// Full generator including -(i/hbar)[H0, rho].
    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const;
    /// rho_ab <- exp(-i (E_a - E_b) h / hbar) rho_ab
    void kinetic_phase(Eigen::MatrixXcd& rho, double h) const;

    const MomentumLattice& lattice() const noexcept { return lattice_; }

private:
    MomentumLattice lattice_;
    PhysicalParams params_;
    int max_shift_;
    std::vector<std::vector<double>> rate_;  // [s + max_shift][i]
    std::vector<std::vector<double>> amp_;
    std::vector<double> loss_;
    std::vector<double> energy_;
};

struct GridDiagnostics {
    double t = 0.0;
    double trace = 0.0;
    double min_eig = 0.0;
    double offdiag_l2 = 0.0;
    double diag_l1_dist_to_maxwell = 0.0;
    double leakage = 0.0;
};

struct GridEvolveOptions {
    StructureFactorForm form = StructureFactorForm::maxwell_boltzmann;
    double record_interval = 0.0;
    /// Hard error when the smallest eigenvalue drops below -tol * largest.
    double positivity_tol = 1e-6;
};

struct GridEvolveResult {
    MomentumGridDensityMatrix state;
    std::vector<GridDiagnostics> diagnostics;
    std::size_t steps = 0;
    double dt = 0.0;
};

/// Explicit evolution of the non-Abelian linear Boltzmann equation on a
/// momentum lattice: exact kinetic phase in Strang half steps around a
/// classical RK4 step of the dissipator. Requires hbar > 0.
GridEvolveResult nonabelian_grid_evolve(const MomentumGridDensityMatrix& rho0, double t_end, double dt,
                                        const PhysicalParams& params, const CrossSection& xs,
                                        const GridEvolveOptions& options = {});

GridDiagnostics diagnose(const MomentumGridDensityMatrix& state, const PhysicalParams& params);

/// Columns: t, trace, min_eig, offdiag_l2, diag_l1_dist_to_maxwell.
void write_csv(std::ostream& os, const std::vector<GridDiagnostics>& diagnostics);

/// Discrete Wigner function on the lattice momenta and n_x positions spanning
/// one period pi hbar / dp:
///   f(x, p_m) = (dp / (pi hbar)) sum_s exp(2 i s dp x / hbar) rho(m+s, m-s).
/// Its x-integral equals rho_mm. Throws std::invalid_argument when
/// n_x < 2n - 1 (harmonics would alias) and DomainError for hbar = 0.
PhaseSpaceField wigner_transform(const MomentumGridDensityMatrix& state, std::size_t n_x,
                                 const PhysicalParams& params);

}  // namespace kinlab::qm
