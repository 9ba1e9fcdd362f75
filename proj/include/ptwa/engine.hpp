#pragma once

#include <Eigen/Dense>
#include <array>
#include <memory>
#include <vector>

#include "ptwa/corr.hpp"
#include "ptwa/model.hpp"
#include "ptwa/pathways.hpp"

namespace ptwa {

/// Uniform-grid nested quadrature specification. All interaction times live
/// on the grid, so kernel lookups reduce to integer index differences.
struct QuadratureSpec {
    double t_max = 300.0;   // fs
    int grid_points = 400;  // intervals; grid has grid_points+1 samples
    int max_order = 2;

    void validate() const;
};

enum class BasisChoice { local, eigen };

/// Per-order reduced density matrices on the time grid, rotated to the local
/// basis. order_rdm[N][ti] is the order-N contribution alone.
struct TimeSeriesResult {
    std::vector<double> times;
    std::vector<std::vector<Eigen::MatrixXcd>> order_rdm;

    int max_order() const { return static_cast<int>(order_rdm.size()) - 1; }
    /// Raw cumulative sum through order `upto` (all orders when negative).
    Eigen::MatrixXcd cumulative(std::size_t ti, int upto = -1) const;
    /// max over times of ||rho - rho^dagger||_max of the raw cumulative sum.
    double hermiticity_defect(int upto = -1) const;
};

/// Hermitize and trace-normalize a perturbative density matrix.
Eigen::MatrixXcd hermitize_normalize(const Eigen::MatrixXcd& rho);
double purity(const Eigen::MatrixXcd& rho);
/// (<sigma_x>, <sigma_y>, <sigma_z>) of a qubit density matrix.
std::array<double, 3> bloch_vector(const Eigen::MatrixXcd& rho);

/// Order-by-order perturbative propagation of the system reduced density
/// matrix by nested trapezoid quadrature over the interaction times.
///
/// Local basis: environment-independent coupling weights, orders 0..3.
/// Eigenbasis: environment-dependent chi weights, orders 0..2.
/// Evaluation parallelizes over the output time index.
class SeriesEngine {
  public:
    SeriesEngine(const SystemModel& model, const BathSpec& bath, const InitialSystemDensity& rho0,
                 const QuadratureSpec& quad, BasisChoice basis, bool parallel = true);

    int order_cap() const { return basis_ == BasisChoice::local ? 3 : 2; }
    int dimension() const { return M_; }
    double dt() const { return table_->dt(); }
    int grid_points() const { return quad_.grid_points; }
    const QuadratureSpec& quadrature() const { return quad_; }
    const KernelTable& table() const { return *table_; }
    const BathKernels& kernels() const { return *kernels_; }
    const BasisCoefficients& coefficients() const { return coeffs_; }
    BasisChoice basis() const { return basis_; }
    const Eigen::MatrixXcd& rho0_native() const { return rho0_native_; }

    /// Grid index of a time in fs; throws if t is not a grid point.
    long time_index(double t_fs) const;

    /// Basis-native order-N RDM element at a grid time.
    cplx rdm_order(int N, long time_index, int row, int col) const;

    /// Local-basis RDM order contribution (local engines).
    cplx local_rdm_order(int N, double t_fs, int row, int col) const;
    /// Eigenbasis RDM order contribution (eigen engines).
    cplx eigen_rdm_order(int N, double t_fs, int row, int col) const;
    /// Order-N contribution to a system observable (matrix in the local basis).
    cplx order_contribution_envfree(const Eigen::MatrixXcd& obs_local, int N, double t_fs) const;

    /// All orders, all grid times, rotated to the local basis.
    TimeSeriesResult assemble_series() const;

    Eigen::MatrixXcd to_local(const Eigen::MatrixXcd& native) const;

  private:
    struct PathData {
        LiouvillePathway path;
        cplx prefactor;             // rho0(initial) x theta weight (local) or rho0 (eigen)
        std::vector<double> de;     // energy difference at minima per segment
        std::vector<double> dcoef;  // [ch*(N+1)+j] diagonal coefficient differences
        std::vector<double> scoef;  // [ch*(N+1)+j] diagonal coefficient sums
    };

    void build_paths();
    cplx phase_factor(const PathData& pd, const long* idx, int N) const;
    cplx element_order(int N, long it, int row, int col) const;
    const std::vector<PathData>& paths_for(int N, int row, int col) const;

    int M_;
    QuadratureSpec quad_;
    BasisChoice basis_;
    bool parallel_;
    UnitSystem units_;
    std::unique_ptr<BathKernels> kernels_;
    std::unique_ptr<KernelTable> table_;
    BasisCoefficients coeffs_;
    Eigen::MatrixXcd coupling_;      // local couplings (theta weights)
    Eigen::MatrixXcd rho0_native_;
    Eigen::MatrixXcd eigvecs_;       // c_n^alpha; identity for the local basis
    std::unique_ptr<ChiKernelRoute> chi_;
    std::vector<std::vector<std::vector<PathData>>> paths_;  // [N][row*M+col]
    bool any_center_ = false;
};

}  // namespace ptwa
