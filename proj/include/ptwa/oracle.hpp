#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "ptwa/common.hpp"
#include "ptwa/model.hpp"

namespace ptwa {

/// One explicitly quantized environmental mode in the dense reference model.
struct OracleMode {
    double wavenumber = 0.0;              // cm^-1
    Eigen::VectorXd state_displacement;   // x0^(n) per system state (mass-weighted)
    int fock_dim = 10;
};

/// Dense system (x) Fock-space model for exact propagation of small baths.
struct DenseModel {
    int system_dim = 0;
    std::vector<OracleMode> modes;
    long dim = 0;
    Eigen::MatrixXcd hamiltonian;
    UnitSystem units;
};

/// H = sum_n eps-tilde_n |n><n| + couplings + sum_k [hbar w (a+a + 1/2)
///     - sqrt(hbar w^3 / 2) (x0^(n)/l_k) ... displacement-coupled ladder term].
/// Total dimension guarded at 20000.
DenseModel build_hamiltonian(const SystemModel& model, const std::vector<OracleMode>& modes,
                             const UnitSystem& units = {});

/// Boltzmann-weighted Fock populations of a bare mode at temperature T,
/// truncated at `dim` levels and renormalized. T <= 0 gives the ground state.
Eigen::VectorXd thermal_fock_weights(double wavenumber, double temperature_K, int dim,
                                     const UnitSystem& units = {});
/// Smallest Fock dimension whose cumulative thermal weight reaches 1 - 1e-10.
int thermal_fock_dim(double wavenumber, double temperature_K, const UnitSystem& units = {});

struct OracleResult {
    std::vector<double> times;
    std::vector<Eigen::MatrixXcd> system_rdm;                 // per time, M x M
    std::vector<std::vector<Eigen::MatrixXcd>> mode_rdm;      // [time][mode]
    std::vector<double> energy;                                // <H>(t)
    std::vector<double> global_trace;                          // Tr rho(t)
    std::vector<double> hermiticity_defect;                    // max |rho - rho^dagger|
    std::vector<Eigen::MatrixXcd> environment_rdm;             // optional (see options)
};

struct OracleOptions {
    bool mode_rdms = true;
    bool environment_rdm = false;  // partial trace over the system (for entropy checks)
};

/// Exact propagation rho(t) = e^{-iHt/hbar} rho0 e^{+iHt/hbar} by one spectral
/// decomposition; rho0 = rho_sys (x) thermal-or-ground modes.
OracleResult propagate(const DenseModel& dense, const Eigen::MatrixXcd& rho_sys0,
                       double temperature_K, std::span<const double> times,
                       const OracleOptions& options = {});

}  // namespace ptwa
