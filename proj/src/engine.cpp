#include "ptwa/engine.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ptwa {

void QuadratureSpec::validate() const {
    if (grid_points < 2) throw ValidationError("quadrature needs at least two grid intervals");
    if (t_max <= 0.0) throw ValidationError("quadrature horizon must be positive");
    if (max_order < 0) throw ValidationError("max_order must be non-negative");
}

Eigen::MatrixXcd TimeSeriesResult::cumulative(std::size_t ti, int upto) const {
    const int cap = upto < 0 ? max_order() : upto;
    Eigen::MatrixXcd acc = order_rdm[0][ti];
    for (int n = 1; n <= cap; ++n) acc += order_rdm[n][ti];
    return acc;
}

double TimeSeriesResult::hermiticity_defect(int upto) const {
    double worst = 0.0;
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
        const Eigen::MatrixXcd rho = cumulative(ti, upto);
        worst = std::max(worst, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
    }
    return worst;
}

Eigen::MatrixXcd hermitize_normalize(const Eigen::MatrixXcd& rho) {
    Eigen::MatrixXcd out = 0.5 * (rho + rho.adjoint());
    const double tr = out.trace().real();
    if (std::abs(tr) < 1e-12) throw NumericalGuardError("density matrix trace vanished");
    return out / tr;
}

double purity(const Eigen::MatrixXcd& rho) { return (rho * rho).trace().real(); }

std::array<double, 3> bloch_vector(const Eigen::MatrixXcd& rho) {
    if (rho.rows() != 2) throw ValidationError("bloch_vector expects a qubit density matrix");
    return {2.0 * rho(0, 1).real(), -2.0 * rho(0, 1).imag(), (rho(0, 0) - rho(1, 1)).real()};
}

SeriesEngine::SeriesEngine(const SystemModel& model, const BathSpec& bath,
                           const InitialSystemDensity& rho0, const QuadratureSpec& quad,
                           BasisChoice basis, bool parallel)
    : M_(model.dimension()), quad_(quad), basis_(basis), parallel_(parallel), units_(bath.units) {
    quad_.validate();
    model.validate();
    rho0.validate();
    if (quad_.max_order > order_cap()) throw ValidationError("max_order exceeds the cap for this basis");
    if (rho0.rho.rows() != M_) throw ValidationError("initial density dimension mismatch");

    kernels_ = std::make_unique<BathKernels>(bath, quad_.t_max);
    table_ = std::make_unique<KernelTable>(*kernels_, quad_.t_max, quad_.grid_points);

    coupling_ = model.couplings;
    if (basis_ == BasisChoice::local) {
        coeffs_ = BasisCoefficients::local_basis(model, bath);
        rho0_native_ = rho0.rho;
        eigvecs_ = Eigen::MatrixXcd::Identity(M_, M_);
    } else {
        Eigen::VectorXd lambdas(model.channel_count());
        for (int c = 0; c < model.channel_count(); ++c)
            lambdas[c] = channel_reorganization(bath.channels[c], bath.units);
        const EigenBasisModel em = diagonalize_system(model, lambdas);
        coeffs_ = BasisCoefficients::eigen_basis(em);
        eigvecs_ = em.coefficients;
        rho0_native_ = eigvecs_.adjoint() * rho0.rho * eigvecs_;
        chi_ = std::make_unique<ChiKernelRoute>(*table_, coeffs_);
    }
    for (std::size_t c = 0; c < table_->channel_count(); ++c)
        any_center_ = any_center_ || table_->has_centers(c);
    build_paths();
}

void SeriesEngine::build_paths() {
    paths_.resize(quad_.max_order + 1);
    const std::size_t nch = table_->channel_count();
    for (int N = 0; N <= quad_.max_order; ++N) {
        paths_[N].resize(static_cast<std::size_t>(M_) * M_);
        for (int r = 0; r < M_; ++r) {
            for (int c = 0; c < M_; ++c) {
                auto all = enumerate_pathways(M_, N, {r, c});
                std::vector<PathData> kept;
                for (auto& p : all) {
                    PathData pd;
                    pd.prefactor = rho0_native_(p.initial().first, p.initial().second);
                    if (basis_ == BasisChoice::local) pd.prefactor *= theta_envfree(p, coupling_);
                    if (pd.prefactor == cplx(0.0, 0.0)) continue;
                    pd.de.resize(N + 1);
                    pd.dcoef.resize(nch * (N + 1));
                    pd.scoef.resize(nch * (N + 1));
                    for (int j = 0; j <= N; ++j) {
                        const auto [nj, njp] = p.pairs[j];
                        pd.de[j] = coeffs_.energies_min[nj] - coeffs_.energies_min[njp];
                        for (std::size_t ch = 0; ch < nch; ++ch) {
                            const auto& dgv = coeffs_.diag[ch];
                            pd.dcoef[ch * (N + 1) + j] = dgv[nj] - dgv[njp];
                            pd.scoef[ch * (N + 1) + j] = dgv[nj] + dgv[njp];
                        }
                    }
                    pd.path = std::move(p);
                    kept.push_back(std::move(pd));
                }
                paths_[N][static_cast<std::size_t>(r) * M_ + c] = std::move(kept);
            }
        }
    }
}

const std::vector<SeriesEngine::PathData>& SeriesEngine::paths_for(int N, int row, int col) const {
    return paths_[N][static_cast<std::size_t>(row) * M_ + col];
}

long SeriesEngine::time_index(double t_fs) const {
    const double di = t_fs / table_->dt();
    const long idx = std::lround(di);
    if (idx < 0 || idx > quad_.grid_points || std::abs(di - static_cast<double>(idx)) > 1e-9)
        throw ValidationError("time does not lie on the quadrature grid");
    return idx;
}

cplx SeriesEngine::phase_factor(const PathData& pd, const long* idx, int N) const {
    const double hbar = units_.hbar;
    const double dtg = table_->dt();
    const std::size_t nch = table_->channel_count();
    double xre = 0.0;   // Re of the exponent (G kernels)
    double xim = 0.0;   // Im of the exponent (energy phases, H kernels, centers)
    for (int j = 0; j <= N; ++j)
        xim -= pd.de[j] * dtg * static_cast<double>(idx[j + 1] - idx[j]) / hbar;
    for (std::size_t ch = 0; ch < nch; ++ch) {
        const double* dc = pd.dcoef.data() + ch * (N + 1);
        const double* sc = pd.scoef.data() + ch * (N + 1);
        for (int j = 0; j <= N; ++j) {
            if (dc[j] == 0.0) continue;
            const long dj = idx[j + 1] - idx[j];
            xim -= dc[j] * sc[j] * table_->h(ch, dj) / hbar;
            xre += dc[j] * dc[j] * table_->dg(ch, dj) / hbar;
            for (int l = 0; l < j; ++l) {
                const long a = idx[j + 1] - idx[l + 1];
                const long b = idx[j + 1] - idx[l];
                const long c = idx[j] - idx[l];
                const long d = idx[j] - idx[l + 1];
                if (sc[l] != 0.0)
                    xim += dc[j] * sc[l] *
                           (table_->h(ch, a) - table_->h(ch, b) + table_->h(ch, c) - table_->h(ch, d)) /
                           hbar;
                if (dc[l] != 0.0)
                    xre -= dc[j] * dc[l] *
                           (table_->dg(ch, a) - table_->dg(ch, b) + table_->dg(ch, c) -
                            table_->dg(ch, d)) /
                           hbar;
            }
        }
        if (any_center_ && table_->has_centers(ch)) {
            for (int j = 0; j <= N; ++j) {
                if (dc[j] == 0.0) continue;
                xim += dc[j] *
                       ((table_->wpx(ch, idx[j + 1]) - table_->wpx(ch, idx[j])) -
                        (table_->wpp(ch, idx[j + 1]) - table_->wpp(ch, idx[j]))) /
                       hbar;
            }
        }
    }
    return std::exp(xre) * cplx(std::cos(xim), std::sin(xim));
}

cplx SeriesEngine::element_order(int N, long it, int row, int col) const {
    const auto& paths = paths_for(N, row, col);
    if (paths.empty()) return 0.0;
    const double dtg = table_->dt();
    const double hbar = units_.hbar;
    cplx total = 0.0;
    const auto w = [dtg](long i, long m) { return dtg * ((i == 0 || i == m) ? 0.5 : 1.0); };

    for (const auto& pd : paths) {
        cplx acc = 0.0;
        long idx[5] = {0, 0, 0, 0, 0};
        idx[N + 1] = it;
        switch (N) {
            case 0: {
                acc = phase_factor(pd, idx, 0);
                break;
            }
            case 1: {
                if (it == 0) break;
                for (long i1 = 0; i1 <= it; ++i1) {
                    idx[1] = i1;
                    cplx f = phase_factor(pd, idx, 1);
                    if (chi_) f *= chi_->chi(pd.path, std::span<const long>(idx, 3));
                    acc += w(i1, it) * f;
                }
                break;
            }
            case 2: {
                if (it == 0) break;
                for (long i2 = 1; i2 <= it; ++i2) {
                    idx[2] = i2;
                    const double w2 = w(i2, it);
                    cplx inner = 0.0;
                    for (long i1 = 0; i1 <= i2; ++i1) {
                        idx[1] = i1;
                        cplx f = phase_factor(pd, idx, 2);
                        if (chi_) f *= chi_->chi(pd.path, std::span<const long>(idx, 4));
                        inner += w(i1, i2) * f;
                    }
                    acc += w2 * inner;
                }
                break;
            }
            case 3: {
                if (it == 0) break;
                for (long i3 = 1; i3 <= it; ++i3) {
                    idx[3] = i3;
                    const double w3 = w(i3, it);
                    cplx mid = 0.0;
                    for (long i2 = 1; i2 <= i3; ++i2) {
                        idx[2] = i2;
                        const double w2 = w(i2, i3);
                        cplx inner = 0.0;
                        for (long i1 = 0; i1 <= i2; ++i1) {
                            idx[1] = i1;
                            inner += w(i1, i2) * phase_factor(pd, idx, 3);
                        }
                        mid += w2 * inner;
                    }
                    acc += w3 * mid;
                }
                break;
            }
            default:
                throw ValidationError("order above the engine cap");
        }
        total += pd.prefactor * acc;
    }
    // (-i/hbar)^N overall prefactor.
    cplx pref = 1.0;
    for (int n = 0; n < N; ++n) pref *= cplx(0.0, -1.0) / hbar;
    return pref * total;
}

cplx SeriesEngine::rdm_order(int N, long ti, int row, int col) const {
    if (N < 0 || N > quad_.max_order) throw ValidationError("order outside the configured range");
    if (row < 0 || row >= M_ || col < 0 || col >= M_) throw ValidationError("element out of range");
    if (ti < 0 || ti > quad_.grid_points) throw ValidationError("time index out of range");
    return element_order(N, ti, row, col);
}

cplx SeriesEngine::local_rdm_order(int N, double t_fs, int row, int col) const {
    if (basis_ != BasisChoice::local) throw ValidationError("engine is not in the local basis");
    return rdm_order(N, time_index(t_fs), row, col);
}

cplx SeriesEngine::eigen_rdm_order(int N, double t_fs, int row, int col) const {
    if (basis_ != BasisChoice::eigen) throw ValidationError("engine is not in the eigenbasis");
    return rdm_order(N, time_index(t_fs), row, col);
}

cplx SeriesEngine::order_contribution_envfree(const Eigen::MatrixXcd& obs_local, int N, double t_fs) const {
    const long ti = time_index(t_fs);
    const Eigen::MatrixXcd obs =
        basis_ == BasisChoice::local ? obs_local : Eigen::MatrixXcd(eigvecs_.adjoint() * obs_local * eigvecs_);
    cplx acc = 0.0;
    for (int r = 0; r < M_; ++r)
        for (int c = 0; c < M_; ++c) acc += obs(r, c) * rdm_order(N, ti, c, r);
    return acc;
}

Eigen::MatrixXcd SeriesEngine::to_local(const Eigen::MatrixXcd& native) const {
    if (basis_ == BasisChoice::local) return native;
    return eigvecs_ * native * eigvecs_.adjoint();
}

TimeSeriesResult SeriesEngine::assemble_series() const {
    TimeSeriesResult out;
    const long G = quad_.grid_points;
    out.times.resize(G + 1);
    for (long i = 0; i <= G; ++i) out.times[i] = table_->dt() * static_cast<double>(i);
    out.order_rdm.assign(quad_.max_order + 1,
                         std::vector<Eigen::MatrixXcd>(G + 1, Eigen::MatrixXcd::Zero(M_, M_)));

#pragma omp parallel for schedule(dynamic) if (parallel_)
    for (long ti = 0; ti <= G; ++ti) {
        for (int N = 0; N <= quad_.max_order; ++N) {
            Eigen::MatrixXcd rho(M_, M_);
            for (int r = 0; r < M_; ++r)
                for (int c = 0; c < M_; ++c) rho(r, c) = element_order(N, ti, r, c);
            out.order_rdm[N][ti] = to_local(rho);
        }
    }
    return out;
}

}  // namespace ptwa
