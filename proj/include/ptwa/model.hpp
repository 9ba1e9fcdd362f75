#pragma once

#include <Eigen/Dense>
#include <optional>
#include <variant>
#include <vector>

#include "ptwa/common.hpp"

namespace ptwa {

/// Continuous Drude-Lorentz spectral density
///   J(w) = 2*lambda*(w/omega_c) / (1 + (w/omega_c)^2),
/// optionally restricted to a frequency window [nu_lo, nu_hi].
/// All frequencies are wavenumbers in cm^-1.
struct DrudeLorentz {
    double lambda = 0.0;
    double omega_c = 0.0;
    double nu_lo = 0.0;
    double nu_hi = std::numeric_limits<double>::infinity();

    double value(double wavenumber) const {
        if (wavenumber < nu_lo || wavenumber > nu_hi) return 0.0;
        const double r = wavenumber / omega_c;
        return 2.0 * lambda * r / (1.0 + r * r);
    }
};

/// One harmonic mode: wavenumber (cm^-1) and mass-weighted displacement of the
/// potential minimum per unit channel coefficient (sqrt(cm^-1) fs).
struct DiscreteMode {
    double wavenumber = 0.0;
    double displacement = 0.0;

    /// Reorganization energy carried by this mode per unit coefficient^2.
    double reorganization(const UnitSystem& u) const {
        const double w = u.omega(wavenumber);
        return 0.5 * w * w * displacement * displacement;
    }
};

/// One bath channel: a continuous density or an explicit mode list. A channel
/// couples to system state n with strength channel_coefficients(n, c); the
/// per-state minimum displacement of mode k is g_n * d_k.
struct SpectralChannel {
    std::variant<DrudeLorentz, std::vector<DiscreteMode>> shape;

    bool is_discrete() const { return std::holds_alternative<std::vector<DiscreteMode>>(shape); }
    const DrudeLorentz& drude_lorentz() const { return std::get<DrudeLorentz>(shape); }
    const std::vector<DiscreteMode>& modes() const { return std::get<std::vector<DiscreteMode>>(shape); }

    void validate() const;
};

enum class WidthRule { thermal, groundState };

/// Wigner wave-packet center of one mode (mass-weighted position/momentum).
struct WignerCenter {
    double x = 0.0;
    double p = 0.0;
};

/// Initial Gaussian Wigner specification of the environment plus channel list.
struct BathSpec {
    std::vector<SpectralChannel> channels;
    double temperature = 0.0;  // K
    WidthRule width_rule = WidthRule::groundState;
    /// Optional per-channel, per-mode wave-packet centers (discrete channels
    /// only). Empty means all centers at the phase-space origin.
    std::vector<std::vector<WignerCenter>> centers;
    UnitSystem units;

    void validate() const;

    /// sigma_x(omega) for a mode wavenumber, per the active width rule.
    double sigma_x(double wavenumber) const;
    /// sigma_p = omega * sigma_x, always.
    double sigma_p(double wavenumber) const;
    /// sigma_x * sigma_p; hbar/2 at zero temperature / ground-state rule.
    double sigma_xp(double wavenumber) const;

    WignerCenter center(std::size_t channel, std::size_t mode) const {
        if (channel < centers.size() && mode < centers[channel].size()) return centers[channel][mode];
        return {};
    }
};

/// Discrete system: energies at the coordinate origin (eps-tilde, cm^-1),
/// Hermitian off-diagonal couplings (cm^-1), and per-channel coupling
/// coefficients g_n^(c) (dimensionless, one column per bath channel).
struct SystemModel {
    Eigen::VectorXd energies;
    Eigen::MatrixXcd couplings;
    Eigen::MatrixXd channel_coefficients;

    int dimension() const { return static_cast<int>(energies.size()); }
    int channel_count() const { return static_cast<int>(channel_coefficients.cols()); }

    void validate() const;

    /// Per-state reorganization energy sum_c g_n^(c)^2 * lambda_c given the
    /// per-channel reorganization energies.
    Eigen::VectorXd state_reorganization(const Eigen::VectorXd& channel_lambdas) const;

    /// Energies at the per-state potential minima: eps_n = eps-tilde_n - reorg_n.
    Eigen::VectorXd minimum_energies(const Eigen::VectorXd& channel_lambdas) const;
};

/// System density matrix at t = 0.
struct InitialSystemDensity {
    Eigen::MatrixXcd rho;

    void validate() const;
};

/// Isolated-system eigenbasis: h = sum eps-tilde_n |n><n| + sum Delta_nm |n><m|
/// diagonalized; channel coefficients rotated into G^(c)_{ab} so that the
/// displacement of mode k between eigenstate pair (a, b) is G_ab * d_k.
struct EigenBasisModel {
    Eigen::VectorXd eigen_energies;          // E-tilde_alpha (cm^-1, include reorganization)
    Eigen::VectorXd eigen_energies_minimum;  // E_alpha = E-tilde_alpha - sum_c G_aa^2 lambda_c
    Eigen::MatrixXcd coefficients;           // c_n^alpha, column alpha
    std::vector<Eigen::MatrixXcd> channel_projections;  // per channel: G_ab

    int dimension() const { return static_cast<int>(eigen_energies.size()); }
};

/// Diagonalize the isolated system Hamiltonian and rotate the channel
/// coefficients. `channel_lambdas` holds the per-channel reorganization
/// energies entering E_alpha. Eigenstates are ordered by ascending energy;
/// an already-diagonal coupling matrix yields the identity rotation (ties
/// broken by state index).
EigenBasisModel diagonalize_system(const SystemModel& model, const Eigen::VectorXd& channel_lambdas);

enum class DiscretizationScheme { equalSpacing };

/// Replace a Drude-Lorentz channel by K modes at midpoint frequencies of K
/// equal bins over (0, omega_max], each carrying lambda_k = J(w_k) dw/(pi w_k),
/// rescaled so the total matches the analytic reorganization over the sampled
/// window. Window bounds of the channel are honored (outside modes dropped).
SpectralChannel discretize_channel(const SpectralChannel& ch, int K, double omega_max,
                                   DiscretizationScheme scheme = DiscretizationScheme::equalSpacing);

/// Frequency cutoffs (nu_h, nu_l) that both suppress the Drude-Lorentz
/// reorganization energy to the fraction alpha:
///   nu_h = omega_c tan(pi alpha / 2),  nu_l = omega_c tan(pi (1 - alpha) / 2).
std::pair<double, double> suppression_cutoffs(double lambda, double omega_c, double alpha);

/// (1/pi) Integral of J/w over [nu_lo, nu_hi] for a Drude-Lorentz density:
/// (2 lambda / pi) [atan(nu_hi/w_c) - atan(nu_lo/w_c)].
double windowed_reorganization(const DrudeLorentz& dl, double nu_lo, double nu_hi);

/// Reorganization energy of a channel restricted to its own window
/// (continuous: analytic; discrete: mode sum per unit coefficient^2).
double channel_reorganization(const SpectralChannel& ch, const UnitSystem& units);

}  // namespace ptwa
