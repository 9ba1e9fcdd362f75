#pragma once

#include <Eigen/Dense>
#include <memory>
#include <span>
#include <vector>

#include "ptwa/common.hpp"
#include "ptwa/gauss_legendre.hpp"
#include "ptwa/liouville.hpp"
#include "ptwa/model.hpp"

namespace ptwa {

/// Per-channel base correlation kernels, per unit coefficient product.
/// Times in fs throughout; values carry the natural energy-time units of the
/// phase integrals (h and dg in cm^-1 fs, appendix kernels in cm^-1).
///
/// Discrete channels evaluate mode sums exactly. Continuous channels use a
/// composite Gauss-Legendre rule over the channel window truncated at
/// 20*omega_c, with panel count scaling linearly in the requested time
/// horizon so the oscillatory integrands stay resolved. The plain
/// Drude-Lorentz h(t) instead uses its closed form
///   h(t) = (lambda/omega_c)(1 - exp(-omega_c t)),  omega_c in fs^-1.
class ChannelKernels {
  public:
    ChannelKernels(const SpectralChannel& channel, const BathSpec& bath, std::size_t channel_index,
                   double t_max_hint);

    /// (1/pi) Int J/w^2 sin(wt) dw. Odd in t.
    double h(double t) const;
    /// Delta-g(t) = G(t) - G(0) per unit coefficient:
    /// (2/pi) Int (sigma_x sigma_p / (hbar w^2)) J (cos(wt) - 1) dw. Even in t.
    double dg(double t) const;
    /// G(t) itself; finite only for discrete channels.
    double g_absolute(double t) const;

    // Appendix kernel bases (per unit coefficient product):
    double iB(double t) const;   // (1/hbar) sum sigma_xp w^2 d^2 sin(wt); odd
    double jkB(double t) const;  // sum w^2 d^2 cos(wt); even
    double lB(double t) const;   // sum sigma_xp w^3 d^2 cos(wt); even
    double mB(double t) const;   // hbar sum w^3 d^2 sin(wt); odd

    // Wave-packet center kernels (zero for continuum channels, whose centers
    // sit at the phase-space origin):
    double wpx(double t) const;  // sum w d x' sin(wt)
    double wpp(double t) const;  // sum d p' cos(wt)
    double cB(double t) const;   // sum w^2 d (x' cos(wt) + (p'/w) sin(wt))

    bool is_discrete() const { return discrete_; }

  private:
    struct ModeTerm {
        double omega;      // fs^-1
        double d2;         // displacement^2
        double sigma_xp;   // cm^-1 fs
        double cx, cp;     // wave-packet center
        double d;          // displacement
    };

    bool discrete_ = false;
    double hbar_ = 0.0;
    std::vector<ModeTerm> modes_;      // discrete path
    GaussRule rule_;                   // continuum path
    std::vector<double> j_over_w2_;    // J(w)/w^2 at nodes
    std::vector<double> sigma_xp_w_;   // sigma_xp(w) at nodes
    bool closed_form_h_ = false;
    double cf_lambda_ = 0.0, cf_omega_c_ = 0.0;
};

/// All channels of a bath, sharing one time horizon hint.
class BathKernels {
  public:
    BathKernels(const BathSpec& bath, double t_max_hint);

    const ChannelKernels& channel(std::size_t c) const { return channels_[c]; }
    std::size_t channel_count() const { return channels_.size(); }
    const UnitSystem& units() const { return units_; }

  private:
    std::vector<ChannelKernels> channels_;
    UnitSystem units_;
};

/// Base kernels tabulated on a uniform grid t_i = i * dt, i = 0..grid_points.
/// All engine lookups address grid differences by integer index; negative
/// indices resolve through the kernels' parity. No interpolation.
class KernelTable {
  public:
    KernelTable(const BathKernels& kernels, double t_max, int grid_points);

    double dt() const { return dt_; }
    int grid_points() const { return grid_points_; }
    double t_max() const { return t_max_; }
    std::size_t channel_count() const { return nch_; }
    const UnitSystem& units() const { return units_; }

    double h(std::size_t ch, long idx) const { return odd(tab_[ch].h, idx); }
    double dg(std::size_t ch, long idx) const { return even(tab_[ch].dg, idx); }
    double iB(std::size_t ch, long idx) const { return odd(tab_[ch].iB, idx); }
    double jkB(std::size_t ch, long idx) const { return even(tab_[ch].jkB, idx); }
    double lB(std::size_t ch, long idx) const { return even(tab_[ch].lB, idx); }
    double mB(std::size_t ch, long idx) const { return odd(tab_[ch].mB, idx); }
    /// Absolute-time center kernels; idx must be non-negative.
    double wpx(std::size_t ch, long idx) const { return tab_[ch].wpx[check(idx)]; }
    double wpp(std::size_t ch, long idx) const { return tab_[ch].wpp[check(idx)]; }
    double cB(std::size_t ch, long idx) const { return tab_[ch].cB[check(idx)]; }

    bool has_centers(std::size_t ch) const { return tab_[ch].centered; }

  private:
    struct ChannelTab {
        std::vector<double> h, dg, iB, jkB, lB, mB, wpx, wpp, cB;
        bool centered = false;
    };

    std::size_t check(long idx) const {
        if (idx < 0 || idx > grid_points_) throw ValidationError("kernel table index out of range");
        return static_cast<std::size_t>(idx);
    }
    double odd(const std::vector<double>& v, long idx) const {
        return idx < 0 ? -v[check(-idx)] : v[check(idx)];
    }
    double even(const std::vector<double>& v, long idx) const { return v[check(idx < 0 ? -idx : idx)]; }

    double dt_ = 0.0, t_max_ = 0.0;
    long grid_points_ = 0;
    std::size_t nch_ = 0;
    UnitSystem units_;
    std::vector<ChannelTab> tab_;
};

/// Basis-resolved coupling coefficients: everything the kernels and weights
/// need to know about the active system basis. In the local basis the pair
/// matrices are diag(g); in the eigenbasis they are the rotated projections.
struct BasisCoefficients {
    Eigen::VectorXd energies_min;           // per-state energy at potential minimum (cm^-1)
    std::vector<Eigen::MatrixXcd> pair;     // per channel: A_ab
    std::vector<Eigen::VectorXd> diag;      // per channel: real diagonal of A

    int dimension() const { return static_cast<int>(energies_min.size()); }

    static BasisCoefficients local_basis(const SystemModel& model, const BathSpec& bath);
    static BasisCoefficients eigen_basis(const EigenBasisModel& eigen);
};

/// State-indexed kernel evaluators over the continuous channel kernels.
/// This is the direct (reference) evaluation path; the engine uses KernelTable.
class StateKernels {
  public:
    StateKernels(const BathKernels& kernels, BasisCoefficients coeffs)
        : kernels_(&kernels), coeffs_(std::move(coeffs)) {}

    /// H^{ab}_{cd}(t), Eq.-level contract: (1/pi) Int w^-2 (J_ac+J_ad-J_bc-J_bd) sin(wt).
    double h_kernel(int a, int b, int c, int d, double t) const;
    /// G^{ab}_{cd}(t1) - G^{ab}_{cd}(t2); only differences are finite for continuum channels.
    double g_kernel_diff(int a, int b, int c, int d, double t1, double t2) const;
    /// Standalone G(t); discrete channels only.
    double g_kernel_discrete(int a, int b, int c, int d, double t) const;

    /// Phase accumulators over a pathway at interaction times tau_0..tau_{N+1}
    /// (tau_0 = 0, tau_{N+1} = t, non-decreasing).
    cplx phi_H(const LiouvillePathway& p, std::span<const double> times) const;
    double phi_G(const LiouvillePathway& p, std::span<const double> times) const;
    cplx phi_tot(const LiouvillePathway& p, std::span<const double> times) const;
    /// Wave-packet center phase (the x'/p' factors of the RDM expressions);
    /// purely real phase, returned as the exponent multiplying i.
    double center_phase(const LiouvillePathway& p, std::span<const double> times) const;

    const BasisCoefficients& coefficients() const { return coeffs_; }
    const BathKernels& kernels() const { return *kernels_; }

  private:
    void check_times(const LiouvillePathway& p, std::span<const double> times) const;

    const BathKernels* kernels_;
    BasisCoefficients coeffs_;
};

enum class AppendixKernel { I, J, K, L, M };

/// Appendix correlation kernels for a discrete bath in the active basis.
/// Complex in general (off-diagonal pair coefficients may be complex).
cplx appendix_kernel(AppendixKernel tag, const BathKernels& kernels, const BasisCoefficients& coeffs,
                     int a, int b, int c, int d, double t);

/// Geometry of one environmental mode against the system basis: angular
/// frequency (fs^-1) and the per-state minimum displacement x0^(n).
struct ModeGeometry {
    double omega = 0.0;
    Eigen::VectorXd state_displacement;

    double mean_shift(std::pair<int, int> pr) const {
        return 0.5 * (state_displacement[pr.first] + state_displacement[pr.second]);
    }
    double diff_shift(std::pair<int, int> pr) const {
        return state_displacement[pr.first] - state_displacement[pr.second];
    }
};

/// Flattened view of the discrete modes of a bath (throws on continuum channels).
struct BathMode {
    double omega = 0.0;      // fs^-1
    double d = 0.0;          // displacement per unit coefficient
    double sigma_x = 0.0;
    double sigma_p = 0.0;
    double sigma_xp = 0.0;
    double cx = 0.0, cp = 0.0;
    std::size_t channel = 0;
};
std::vector<BathMode> flatten_discrete(const BathSpec& bath);

/// Mode geometry of one flattened bath mode in the given basis (diagonal
/// coefficients only; the displacements entering the classical trajectories).
ModeGeometry mode_geometry(const BathMode& mode, const BasisCoefficients& coeffs);

/// Classical trajectory of one mode along a pathway: position and momentum at
/// time s within segment j (tau_j <= s <= tau_{j+1}).
std::pair<double, double> classical_trajectory(const LiouvillePathway& p, std::span<const double> times,
                                               const ModeGeometry& geom, double x0, double p0, int segment,
                                               double s);

/// Closed-form Int_{tau_j}^{tau_{j+1}} x_cl(s) ds for segment j.
double integrated_trajectory(const LiouvillePathway& p, std::span<const double> times,
                             const ModeGeometry& geom, double x0, double p0, int segment);

}  // namespace ptwa
