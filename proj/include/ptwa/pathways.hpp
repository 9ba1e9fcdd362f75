#pragma once

#include <span>
#include <vector>

#include "ptwa/corr.hpp"
#include "ptwa/liouville.hpp"

namespace ptwa {

/// One mode's data for the environment-dependent pathway weights.
struct ChiMode {
    ModeGeometry geom;      // omega (fs^-1) and per-state diagonal displacements
    double sigma_xp = 0.0;  // cm^-1 fs
    double cx = 0.0, cp = 0.0;
    double d = 0.0;         // displacement per unit coefficient
    std::size_t channel = 0;

    /// Off-diagonal pair displacement x0^(a,b) of this mode.
    cplx pair_displacement(const BasisCoefficients& coeffs, int a, int b) const {
        return coeffs.pair[channel](a, b) * d;
    }
};

/// Flatten a discrete bath against a basis for the direct chi evaluators.
std::vector<ChiMode> chi_modes(const BathSpec& bath, const BasisCoefficients& coeffs);

/// theta^{(k)}_{j,N} of the classical-trajectory part of the pathway weight:
/// the sigma_x sigma_p sine sums, the wave-packet center terms, and the
/// non-local shift x_nl evaluated at tau_j. Complex because of the i/hbar
/// width term. `j` is 1-based (the j-th interaction).
cplx theta_helper(const LiouvillePathway& p, std::span<const double> times, const ChiMode& mode, int j,
                  double hbar);

/// zeta^{(k)}_{j,N}: the momentum-fluctuation cosine sums.
double zeta_helper(const LiouvillePathway& p, std::span<const double> times, const ChiMode& mode, int j);

/// x^{(J)}_{k,nl}(t): accumulated mean-shift response of mode k after the
/// first J+1 segments, evaluated at time t.
double x_nonlocal(const LiouvillePathway& p, std::span<const double> times, const ChiMode& mode, int J,
                  double t);

/// First- and second-order environment-dependent pathway weights, evaluated
/// directly from the mode sums (the explicit chi^(1)/chi^(2) expressions).
/// These are the test-oracle route; production uses ChiKernelRoute.
cplx chi1_direct(const LiouvillePathway& p, std::span<const double> times,
                 std::span<const ChiMode> modes, const BasisCoefficients& coeffs, double hbar);
cplx chi2_direct(const LiouvillePathway& p, std::span<const double> times,
                 std::span<const ChiMode> modes, const BasisCoefficients& coeffs, double hbar);

/// Production chi evaluation assembled from tabulated two-point kernels
/// (the N/P correlation-function route); queries only grid-difference times.
class ChiKernelRoute {
  public:
    ChiKernelRoute(const KernelTable& table, const BasisCoefficients& coeffs)
        : table_(&table), coeffs_(&coeffs) {}

    /// chi^(N) for N = order of p (1 or 2); idx holds grid indices of
    /// tau_0..tau_{N+1}.
    cplx chi(const LiouvillePathway& p, std::span<const long> idx) const;

  private:
    cplx n_factor(const LiouvillePathway& p, std::span<const long> idx, int j, std::size_t ch) const;

    const KernelTable* table_;
    const BasisCoefficients* coeffs_;
};

/// Bracket pair (a, b) and sign of step j of a pathway: left steps contribute
/// +x^(n_j, n_{j-1}), right steps -x^(n'_{j-1}, n'_j).
struct StepBracket {
    int a = 0, b = 0;
    int sign = +1;
};
StepBracket step_bracket(const LiouvillePathway& p, int j);

}  // namespace ptwa
