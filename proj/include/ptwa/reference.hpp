#pragma once

#include <Eigen/Dense>

#include "ptwa/corr.hpp"
#include "ptwa/liouville.hpp"
#include "ptwa/model.hpp"
#include "ptwa/pathways.hpp"

namespace ptwa {

/// Serial reference evaluation of the perturbative RDM elements: the nested
/// trapezoid integral is walked tuple by tuple with every phase recomputed
/// from the continuous kernels (no tables, no incremental reuse, no threads).
/// Kept as an independent cross-check of the production engine and as the
/// baseline of the quadrature benchmark.
class ReferencePath {
  public:
    ReferencePath(const SystemModel& model, const BathSpec& bath, const InitialSystemDensity& rho0,
                  double t_max, int grid_points);

    /// Local-basis order-N element at grid time index `it`.
    cplx local_rdm_order(int N, long it, int row, int col) const;

    /// Eigenbasis order-N element via the direct chi^(1)/chi^(2) mode sums
    /// (discrete baths only).
    cplx eigen_rdm_order(int N, long it, int row, int col) const;

    double dt() const { return dt_; }

  private:
    cplx element(int N, long it, int row, int col, bool eigen) const;

    int M_;
    double dt_;
    long grid_;
    UnitSystem units_;
    BathSpec bath_;
    SystemModel model_;
    Eigen::MatrixXcd rho0_;
    std::unique_ptr<BathKernels> kernels_;
    // Local basis machinery.
    BasisCoefficients local_coeffs_;
    std::unique_ptr<StateKernels> local_kernels_;
    // Eigenbasis machinery (built lazily for discrete baths).
    BasisCoefficients eigen_coeffs_;
    std::unique_ptr<StateKernels> eigen_kernels_;
    Eigen::MatrixXcd eigvecs_;
    Eigen::MatrixXcd rho0_eigen_;
    std::vector<ChiMode> chi_modes_;
    bool eigen_ready_ = false;
};

}  // namespace ptwa
