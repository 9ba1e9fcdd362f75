#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ptwa/common.hpp"
#include "ptwa/engine.hpp"
#include "ptwa/model.hpp"

namespace ptwa {

/// Weyl symbol of the harmonic projector |n><m| at phase-space point (x, p)
/// for a mode of angular frequency omega (fs^-1), in the coherent variable
/// a = sqrt(omega/2hbar)(x + i p/omega).
cplx weyl_projection(int n, int m, double omega, double x, double p, double hbar = UnitSystem{}.hbar);

/// Dense complex polynomial in two variables (x, p); coeff(i, j) multiplies x^i p^j.
class PolyXP {
  public:
    PolyXP() : deg_(0), c_(1, 0.0) {}
    explicit PolyXP(cplx constant) : deg_(0), c_(1, constant) {}
    /// c0 + cx*x + cp*p
    PolyXP(cplx c0, cplx cx, cplx cp);

    int degree() const { return deg_; }
    cplx coeff(int i, int j) const { return (i <= deg_ && j <= deg_) ? c_[idx(i, j)] : 0.0; }
    cplx& at(int i, int j) { return c_[idx(i, j)]; }

    PolyXP operator*(const PolyXP& o) const;
    PolyXP operator+(const PolyXP& o) const;
    PolyXP operator*(cplx s) const;
    PolyXP pow(int k) const;
    cplx eval(double x, double p) const;

  private:
    explicit PolyXP(int deg) : deg_(deg), c_(static_cast<std::size_t>(deg + 1) * (deg + 1), 0.0) {}
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * (deg_ + 1) + j; }

    int deg_;
    std::vector<cplx> c_;
};

/// Polynomial part of the Weyl projector: (|n><m|)_W = weyl_polynomial * e^{-2 a* a},
/// with `a_of_xp` the (complex-coefficient) linear map from (x, p) to a.
PolyXP weyl_polynomial(int n, int m, const PolyXP& a_of_xp);

/// Gaussian phase-space weight with optional extra quadratic/linear exponent
/// terms (real quadratic, complex linear) on top of the Wigner normalization
/// hbar/(sigma_x sigma_p) / (2 pi hbar):
///   exp[ -(x-x')^2/2sx^2 - (p-p')^2/2sp^2 + qxx x^2 + qpp p^2 + lx x + lp p + c0 ]
struct PhaseSpaceGaussian {
    double center_x = 0.0, center_p = 0.0;
    double sigma_x = 1.0, sigma_p = 1.0;
    double qxx = 0.0, qpp = 0.0;
    cplx lx = 0.0, lp = 0.0;
    cplx c0 = 0.0;
};

/// Exact completed-square moments of a PhaseSpaceGaussian times a linear
/// phase e^{i(Ax + Bp)}; moment(i, j) = Int dx dp/(2 pi hbar) (hbar/sx sp)
/// x^i p^j exp(...). Built once, then polynomials contract against it.
class GaussianMoments {
  public:
    GaussianMoments(const PhaseSpaceGaussian& g, double A, double B, int max_degree);
    cplx contract(const PolyXP& poly) const;
    cplx moment(int i, int j) const { return mx_[i] * mp_[j] * norm_; }

  private:
    int max_degree_;
    cplx norm_;
    std::vector<cplx> mx_, mp_;  // shifted one-dimensional moments
};

/// Int dx dp/(2 pi hbar) (hbar/(sx sp)) poly(x,p) exp(gaussian) e^{i(Ax+Bp)}.
cplx gaussian_phase_integral(const PolyXP& poly, const PhaseSpaceGaussian& g, double A, double B);

/// Von Neumann entropy -sum lambda ln lambda (k_B = 1) of a density matrix;
/// requires unit trace within `trace_tol`.
double von_neumann_entropy(const Eigen::MatrixXcd& rho, double trace_tol = 1e-6);

/// Reduced density matrix of one environmental mode.
struct ModeRDM {
    std::size_t mode = 0;
    double omega_cm1 = 0.0;
    double t = 0.0;
    Eigen::MatrixXcd rho;     // post-processed: Hermitian, unit trace, clipped
    double raw_trace = 0.0;   // population captured by the truncated basis
    bool truncation_warning = false;

    double entropy() const { return von_neumann_entropy(rho); }
};

/// Per-mode reduced density matrices of a discrete bath driven by an
/// environment-independent perturbation, at perturbative order <= 2.
/// Pathways end on diagonal system pairs; the observed mode's Weyl symbol is
/// integrated against its Gaussian analytically while every other mode
/// contributes its characteristic-function factor.
class ModeRdmCalculator {
  public:
    ModeRdmCalculator(const SystemModel& model, const BathSpec& bath, const InitialSystemDensity& rho0,
                      const QuadratureSpec& quad, int n_max = 2, int max_order = 2);

    std::size_t mode_count() const { return modes_.size(); }
    double mode_wavenumber(std::size_t k) const { return modes_[k].omega * units_.hbar; }
    /// Index of the discretized mode closest to a probe wavenumber.
    std::size_t nearest_mode(double wavenumber_cm1) const;

    /// rho_env^(k)(t); t must lie on the quadrature grid.
    ModeRDM mode_rdm(std::size_t k, double t_fs, int clip_guard_exponent = 8) const;

    /// Entropies S_k(t) for a set of modes and grid times (parallel over jobs).
    /// Returns values indexed [mode][time].
    std::vector<std::vector<double>> entropy_grid(const std::vector<std::size_t>& mode_ids,
                                                  const std::vector<double>& times_fs,
                                                  bool parallel = true) const;

  private:
    struct PathData {
        LiouvillePathway path;
        cplx prefactor;
        std::vector<double> de;
        std::vector<double> dcoef, scoef;  // [ch*(N+1)+j]
    };

    cplx phase_all(const PathData& pd, const long* idx, int N) const;
    void mode_contribution(const PathData& pd, const long* idx, int N, std::size_t k,
                           Eigen::MatrixXcd& acc, double weight) const;

    int M_;
    int n_max_;
    int max_order_;
    QuadratureSpec quad_;
    UnitSystem units_;
    BasisCoefficients coeffs_;
    std::vector<BathMode> modes_;
    std::unique_ptr<BathKernels> kernels_;
    std::unique_ptr<KernelTable> table_;
    std::vector<std::vector<PathData>> paths_;  // [N], final pairs folded in
};

}  // namespace ptwa
