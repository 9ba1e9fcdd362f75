#pragma once

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace ptwa {

using cplx = std::complex<double>;
inline constexpr cplx kI{0.0, 1.0};

/// Bad model input, malformed configuration, out-of-contract arguments.
class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical sanity bound was violated (under-resolved quadrature,
/// non-positive-definite Gaussian, negative density-matrix eigenvalues
/// beyond tolerance). Distinct from ValidationError so the CLI can map
/// it to its own exit code.
class NumericalGuardError : public std::runtime_error {
  public:
    explicit NumericalGuardError(const std::string& what) : std::runtime_error(what) {}
};

/// Unit system: energies in cm^-1, times in fs, temperatures in K.
/// Mass-weighted coordinates carry sqrt(cm^-1)*fs so that
/// p^2/2 + omega^2 x^2/2 is an energy when omega is in fs^-1.
/// Phase accrued by energy E over time t is E*t/hbar.
struct UnitSystem {
    double hbar = 5308.837;  // cm^-1 fs, 1/(2*pi*c)
    double kB = 0.695035;    // cm^-1 / K

    /// Angular frequency (fs^-1) of a mode quoted as a wavenumber (cm^-1).
    double omega(double wavenumber_cm1) const { return wavenumber_cm1 / hbar; }

    /// beta*hbar*omega for a mode wavenumber at temperature T (K); 0 K maps to +inf.
    double beta_hbar_omega(double wavenumber_cm1, double temperature_K) const {
        if (temperature_K <= 0.0) return std::numeric_limits<double>::infinity();
        return wavenumber_cm1 / (kB * temperature_K);
    }
};

}  // namespace ptwa
