#include "ptwa/envmode.hpp"

#include <algorithm>
#include <cmath>

#include "ptwa/liouville.hpp"

namespace ptwa {

namespace {

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

double double_factorial_odd(int k) {  // (2k-1)!!
    double r = 1.0;
    for (int i = 2 * k - 1; i > 1; i -= 2) r *= i;
    return r;
}

}  // namespace

cplx weyl_projection(int n, int m, double omega, double x, double p, double hbar) {
    if (n < 0 || m < 0) throw ValidationError("weyl_projection: negative Fock indices");
    const cplx a = std::sqrt(omega / (2.0 * hbar)) * cplx(x, p / omega);
    const cplx as = std::conj(a);
    cplx acc = 0.0;
    for (int j = 0; j <= n; ++j) {
        for (int k = 0; k <= std::min(j, m); ++k) {
            const double coef = factorial(k) * binom(n, j) * binom(j, k) * binom(m, k) *
                                std::pow(-0.5, k);
            acc += coef * std::pow(as, n - k) * std::pow(a, m - k);
        }
    }
    const double pref = std::pow(2.0, m + 1) / std::sqrt(factorial(n) * factorial(m));
    return pref * acc * std::exp(-2.0 * (as * a).real());
}

PolyXP::PolyXP(cplx c0, cplx cx, cplx cp) : deg_(1), c_(4, 0.0) {
    at(0, 0) = c0;
    at(1, 0) = cx;
    at(0, 1) = cp;
}

PolyXP PolyXP::operator*(const PolyXP& o) const {
    PolyXP out(deg_ + o.deg_);
    for (int i = 0; i <= deg_; ++i)
        for (int j = 0; j <= deg_; ++j) {
            const cplx cij = coeff(i, j);
            if (cij == cplx(0.0, 0.0)) continue;
            for (int k = 0; k <= o.deg_; ++k)
                for (int l = 0; l <= o.deg_; ++l) {
                    const cplx ckl = o.coeff(k, l);
                    if (ckl != cplx(0.0, 0.0)) out.at(i + k, j + l) += cij * ckl;
                }
        }
    return out;
}

PolyXP PolyXP::operator+(const PolyXP& o) const {
    PolyXP out(std::max(deg_, o.deg_));
    for (int i = 0; i <= out.deg_; ++i)
        for (int j = 0; j <= out.deg_; ++j) out.at(i, j) = coeff(i, j) + o.coeff(i, j);
    return out;
}

PolyXP PolyXP::operator*(cplx s) const {
    PolyXP out = *this;
    for (auto& c : out.c_) c *= s;
    return out;
}

PolyXP PolyXP::pow(int k) const {
    PolyXP out(cplx(1.0));
    for (int i = 0; i < k; ++i) out = out * (*this);
    return out;
}

cplx PolyXP::eval(double x, double p) const {
    cplx acc = 0.0;
    for (int i = deg_; i >= 0; --i) {
        cplx row = 0.0;
        for (int j = deg_; j >= 0; --j) row = row * p + coeff(i, j);
        acc = acc * x + row;
    }
    return acc;
}

PolyXP weyl_polynomial(int n, int m, const PolyXP& a_of_xp) {
    if (n < 0 || m < 0) throw ValidationError("weyl_polynomial: negative Fock indices");
    // Conjugate-coefficient linear polynomial represents a*.
    PolyXP as_of_xp(std::conj(a_of_xp.coeff(0, 0)), std::conj(a_of_xp.coeff(1, 0)),
                    std::conj(a_of_xp.coeff(0, 1)));
    std::vector<PolyXP> apow{PolyXP(cplx(1.0))}, aspow{PolyXP(cplx(1.0))};
    for (int i = 1; i <= m; ++i) apow.push_back(apow.back() * a_of_xp);
    for (int i = 1; i <= n; ++i) aspow.push_back(aspow.back() * as_of_xp);

    PolyXP acc{cplx(0.0)};
    for (int j = 0; j <= n; ++j)
        for (int k = 0; k <= std::min(j, m); ++k) {
            const double coef =
                factorial(k) * binom(n, j) * binom(j, k) * binom(m, k) * std::pow(-0.5, k);
            acc = acc + aspow[n - k] * apow[m - k] * cplx(coef);
        }
    return acc * cplx(std::pow(2.0, m + 1) / std::sqrt(factorial(n) * factorial(m)));
}

GaussianMoments::GaussianMoments(const PhaseSpaceGaussian& g, double A, double B, int max_degree)
    : max_degree_(max_degree) {
    const double mx = 1.0 / (g.sigma_x * g.sigma_x) - 2.0 * g.qxx;
    const double mp = 1.0 / (g.sigma_p * g.sigma_p) - 2.0 * g.qpp;
    if (mx <= 0.0 || mp <= 0.0)
        throw NumericalGuardError("gaussian_phase_integral: quadratic form not positive definite");
    const cplx bx = g.center_x / (g.sigma_x * g.sigma_x) + g.lx + cplx(0.0, A);
    const cplx bp = g.center_p / (g.sigma_p * g.sigma_p) + g.lp + cplx(0.0, B);
    const cplx mux = bx / mx;
    const cplx mup = bp / mp;
    const cplx expo = g.c0 - 0.5 * g.center_x * g.center_x / (g.sigma_x * g.sigma_x) -
                      0.5 * g.center_p * g.center_p / (g.sigma_p * g.sigma_p) + 0.5 * bx * bx / mx +
                      0.5 * bp * bp / mp;
    norm_ = std::exp(expo) / (g.sigma_x * g.sigma_p * std::sqrt(mx * mp));

    // E[(mu + y)^n] with y centered Gaussian of variance 1/m.
    auto shifted = [&](cplx mu, double m, std::vector<cplx>& out) {
        std::vector<cplx> mupow(max_degree_ + 1, 1.0);
        for (int n = 1; n <= max_degree_; ++n) mupow[n] = mupow[n - 1] * mu;
        std::vector<double> varpow(max_degree_ / 2 + 1, 1.0);
        for (int k = 1; 2 * k <= max_degree_; ++k) varpow[k] = varpow[k - 1] / m;
        out.assign(max_degree_ + 1, 0.0);
        for (int n = 0; n <= max_degree_; ++n) {
            cplx acc = 0.0;
            for (int k = 0; 2 * k <= n; ++k)
                acc += binom(n, 2 * k) * double_factorial_odd(k) * varpow[k] * mupow[n - 2 * k];
            out[n] = acc;
        }
    };
    shifted(mux, mx, mx_);
    shifted(mup, mp, mp_);
}

cplx GaussianMoments::contract(const PolyXP& poly) const {
    if (poly.degree() > max_degree_) throw ValidationError("moment table degree too small");
    cplx acc = 0.0;
    for (int i = 0; i <= poly.degree(); ++i)
        for (int j = 0; j <= poly.degree(); ++j) {
            const cplx c = poly.coeff(i, j);
            if (c != cplx(0.0, 0.0)) acc += c * mx_[i] * mp_[j];
        }
    return acc * norm_;
}

cplx gaussian_phase_integral(const PolyXP& poly, const PhaseSpaceGaussian& g, double A, double B) {
    return GaussianMoments(g, A, B, poly.degree()).contract(poly);
}

double von_neumann_entropy(const Eigen::MatrixXcd& rho, double trace_tol) {
    if (std::abs(rho.trace().real() - 1.0) > trace_tol || std::abs(rho.trace().imag()) > trace_tol)
        throw ValidationError("entropy: density matrix trace deviates from one");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        const double lam = es.eigenvalues()[i];
        if (lam > 0.0) s -= lam * std::log(lam);
    }
    return s;
}

ModeRdmCalculator::ModeRdmCalculator(const SystemModel& model, const BathSpec& bath,
                                     const InitialSystemDensity& rho0, const QuadratureSpec& quad,
                                     int n_max, int max_order)
    : M_(model.dimension()), n_max_(n_max), max_order_(max_order), quad_(quad), units_(bath.units) {
    quad_.validate();
    model.validate();
    rho0.validate();
    if (n_max_ < 0) throw ValidationError("mode_rdm: n_max must be non-negative");
    if (max_order_ < 0 || max_order_ > 2)
        throw ValidationError("mode reduced density matrices are derived through second order only");
    modes_ = flatten_discrete(bath);
    coeffs_ = BasisCoefficients::local_basis(model, bath);
    kernels_ = std::make_unique<BathKernels>(bath, quad_.t_max);
    table_ = std::make_unique<KernelTable>(*kernels_, quad_.t_max, quad_.grid_points);

    const Eigen::MatrixXcd& coupling = model.couplings;
    const std::size_t nch = table_->channel_count();
    paths_.resize(max_order_ + 1);
    for (int N = 0; N <= max_order_; ++N) {
        for (int f = 0; f < M_; ++f) {
            for (auto& p : enumerate_pathways(M_, N, {f, f})) {
                PathData pd;
                pd.prefactor = rho0.rho(p.initial().first, p.initial().second);
                pd.prefactor *= theta_envfree(p, coupling);
                if (pd.prefactor == cplx(0.0, 0.0)) continue;
                pd.de.resize(N + 1);
                pd.dcoef.resize(nch * (N + 1));
                pd.scoef.resize(nch * (N + 1));
                for (int j = 0; j <= N; ++j) {
                    const auto [nj, njp] = p.pairs[j];
                    pd.de[j] = coeffs_.energies_min[nj] - coeffs_.energies_min[njp];
                    for (std::size_t ch = 0; ch < nch; ++ch) {
                        pd.dcoef[ch * (N + 1) + j] = coeffs_.diag[ch][nj] - coeffs_.diag[ch][njp];
                        pd.scoef[ch * (N + 1) + j] = coeffs_.diag[ch][nj] + coeffs_.diag[ch][njp];
                    }
                }
                pd.path = std::move(p);
                paths_[N].push_back(std::move(pd));
            }
        }
    }
}

std::size_t ModeRdmCalculator::nearest_mode(double wavenumber_cm1) const {
    std::size_t best = 0;
    double dist = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < modes_.size(); ++k) {
        const double d = std::abs(modes_[k].omega * units_.hbar - wavenumber_cm1);
        if (d < dist) {
            dist = d;
            best = k;
        }
    }
    return best;
}

cplx ModeRdmCalculator::phase_all(const PathData& pd, const long* idx, int N) const {
    const double hbar = units_.hbar;
    const double dtg = table_->dt();
    const std::size_t nch = table_->channel_count();
    double xre = 0.0, xim = 0.0;
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
            if (table_->has_centers(ch))
                xim += dc[j] *
                       ((table_->wpx(ch, idx[j + 1]) - table_->wpx(ch, idx[j])) -
                        (table_->wpp(ch, idx[j + 1]) - table_->wpp(ch, idx[j]))) /
                       hbar;
        }
    }
    return cplx(xre, xim);
}

void ModeRdmCalculator::mode_contribution(const PathData& pd, const long* idx, int N, std::size_t k,
                                          Eigen::MatrixXcd& acc, double weight) const {
    const BathMode& mode = modes_[k];
    const double hbar = units_.hbar;
    const double w = mode.omega;
    const double dtg = table_->dt();
    const double t = dtg * static_cast<double>(idx[N + 1]);
    const double* dc = pd.dcoef.data() + mode.channel * (N + 1);
    const double* sc = pd.scoef.data() + mode.channel * (N + 1);

    // Linear-phase coefficients of mode k accumulated along the pathway.
    double A = 0.0, B = 0.0;
    for (int j = 0; j <= N; ++j) {
        const double dxj = dc[j] * mode.d;
        if (dxj == 0.0) continue;
        const double t1 = dtg * static_cast<double>(idx[j + 1]);
        const double t0 = dtg * static_cast<double>(idx[j]);
        A += w * dxj * (std::sin(w * t1) - std::sin(w * t0));
        B += dxj * (std::cos(w * t1) - std::cos(w * t0));
    }

    // Subtract mode k's own characteristic-function factor from the all-mode
    // phase (it is replaced by the Weyl-weighted Gaussian integral).
    cplx phik(-(mode.sigma_x * mode.sigma_x * A * A + mode.sigma_p * mode.sigma_p * B * B) /
                  (2.0 * hbar * hbar),
              (A * mode.cx - B * mode.cp) / hbar);
    const cplx xall = phase_all(pd, idx, N);
    const cplx rest = std::exp(xall - phik);

    // Classical endpoint shift of mode k at the observation time.
    double Sx = 0.0, Sp = 0.0;
    {
        const double tN = dtg * static_cast<double>(idx[N]);
        const double xbarN = 0.5 * sc[N] * mode.d;
        Sx += xbarN * (1.0 - std::cos(w * (t - tN)));
        Sp += xbarN * w * std::sin(w * (t - tN));
        for (int l = 0; l < N; ++l) {
            const double xbar = 0.5 * sc[l] * mode.d;
            if (xbar == 0.0) continue;
            const double ta = dtg * static_cast<double>(idx[l]);
            const double tb = dtg * static_cast<double>(idx[l + 1]);
            Sx += xbar * (std::cos(w * (t - tb)) - std::cos(w * (t - ta)));
            Sp += xbar * w * (-std::sin(w * (t - tb)) + std::sin(w * (t - ta)));
        }
    }

    // a(t) = e^{-i w t} a0 + aS, linear in the initial conditions.
    const double root = std::sqrt(w / (2.0 * hbar));
    const cplx rot = std::exp(cplx(0.0, -w * t));
    const PolyXP a_of_xp(root * cplx(Sx, Sp / w), root * rot, root * rot * cplx(0.0, 1.0) / w);

    // e^{-2 a* a} as Gaussian exponent pieces: the cross term with the
    // initial conditions is -(2w/hbar)(cx x0 + (cp/w) p0).
    const double cx = Sx * std::cos(w * t) - Sp / w * std::sin(w * t);
    const double cp = Sx * std::sin(w * t) + Sp / w * std::cos(w * t);
    PhaseSpaceGaussian g;
    g.center_x = mode.cx;
    g.center_p = mode.cp;
    g.sigma_x = mode.sigma_x;
    g.sigma_p = mode.sigma_p;
    g.qxx = -w / hbar;
    g.qpp = -1.0 / (hbar * w);
    g.lx = -2.0 * w / hbar * cx;
    g.lp = -2.0 * cp / hbar;
    g.c0 = -(w / hbar) * (Sx * Sx + Sp * Sp / (w * w));

    GaussianMoments moments(g, A / hbar, -B / hbar, 2 * n_max_);
    const cplx common = weight * pd.prefactor * rest;

    // Contract (a*)^alpha a^beta against the moments once, then assemble every
    // projector element from the contraction table.
    const PolyXP as_of_xp(std::conj(a_of_xp.coeff(0, 0)), std::conj(a_of_xp.coeff(1, 0)),
                          std::conj(a_of_xp.coeff(0, 1)));
    std::vector<PolyXP> apow{PolyXP(cplx(1.0))}, aspow{PolyXP(cplx(1.0))};
    for (int i = 1; i <= n_max_; ++i) {
        apow.push_back(apow.back() * a_of_xp);
        aspow.push_back(aspow.back() * as_of_xp);
    }
    std::vector<std::vector<cplx>> T(n_max_ + 1, std::vector<cplx>(n_max_ + 1));
    for (int al = 0; al <= n_max_; ++al)
        for (int be = 0; be <= n_max_; ++be) T[al][be] = moments.contract(aspow[al] * apow[be]);

    for (int n = 0; n <= n_max_; ++n)
        for (int m = 0; m <= n_max_; ++m) {
            cplx val = 0.0;
            for (int j = 0; j <= n; ++j)
                for (int k = 0; k <= std::min(j, m); ++k) {
                    const double coef = factorial(k) * binom(n, j) * binom(j, k) * binom(m, k) *
                                        std::pow(-0.5, k);
                    val += coef * T[n - k][m - k];
                }
            val *= std::pow(2.0, m + 1) / std::sqrt(factorial(n) * factorial(m));
            // Tr[|n><m| rho] fills element (m, n).
            acc(m, n) += common * val;
        }
}

ModeRDM ModeRdmCalculator::mode_rdm(std::size_t k, double t_fs, int clip_guard_exponent) const {
    if (k >= modes_.size()) throw ValidationError("mode index out of range");
    const double dtg = table_->dt();
    const double di = t_fs / dtg;
    const long it = std::lround(di);
    if (it < 0 || it > quad_.grid_points || std::abs(di - static_cast<double>(it)) > 1e-9)
        throw ValidationError("mode_rdm: time does not lie on the quadrature grid");

    const double hbar = units_.hbar;
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n_max_ + 1, n_max_ + 1);
    const auto wfun = [dtg](long i, long m) { return dtg * ((i == 0 || i == m) ? 0.5 : 1.0); };

    for (int N = 0; N <= max_order_; ++N) {
        Eigen::MatrixXcd part = Eigen::MatrixXcd::Zero(n_max_ + 1, n_max_ + 1);
        for (const auto& pd : paths_[N]) {
            long idx[4] = {0, 0, 0, 0};
            idx[N + 1] = it;
            if (N == 0) {
                mode_contribution(pd, idx, 0, k, part, 1.0);
            } else if (N == 1) {
                if (it == 0) continue;
                for (long i1 = 0; i1 <= it; ++i1) {
                    idx[1] = i1;
                    mode_contribution(pd, idx, 1, k, part, wfun(i1, it));
                }
            } else {
                if (it == 0) continue;
                for (long i2 = 1; i2 <= it; ++i2) {
                    idx[2] = i2;
                    const double w2 = wfun(i2, it);
                    for (long i1 = 0; i1 <= i2; ++i1) {
                        idx[1] = i1;
                        mode_contribution(pd, idx, 2, k, part, w2 * wfun(i1, i2));
                    }
                }
            }
        }
        cplx pref = 1.0;
        for (int n = 0; n < N; ++n) pref *= cplx(0.0, -1.0) / hbar;
        acc += pref * part;
    }

    ModeRDM out;
    out.mode = k;
    out.omega_cm1 = modes_[k].omega * units_.hbar;
    out.t = t_fs;
    Eigen::MatrixXcd rho = 0.5 * (acc + acc.adjoint());
    out.raw_trace = rho.trace().real();
    out.truncation_warning = out.raw_trace < 0.99;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    const double clip_tol = std::pow(10.0, -clip_guard_exponent);
    Eigen::VectorXd lam = es.eigenvalues();
    for (int i = 0; i < lam.size(); ++i) {
        if (lam[i] < -clip_tol)
            throw NumericalGuardError("mode_rdm: negative eigenvalue beyond tolerance (under-resolved quadrature)");
        lam[i] = std::max(lam[i], 0.0);
    }
    rho = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
    const double tr = rho.trace().real();
    if (tr <= 0.0) throw NumericalGuardError("mode_rdm: non-positive trace after clipping");
    out.rho = rho / tr;
    return out;
}

std::vector<std::vector<double>> ModeRdmCalculator::entropy_grid(const std::vector<std::size_t>& mode_ids,
                                                                 const std::vector<double>& times_fs,
                                                                 bool parallel) const {
    std::vector<std::vector<double>> out(mode_ids.size(), std::vector<double>(times_fs.size(), 0.0));
    const long jobs = static_cast<long>(mode_ids.size() * times_fs.size());
    std::exception_ptr failure;  // exceptions cannot unwind out of the parallel region
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long j = 0; j < jobs; ++j) {
        try {
            const std::size_t ki = static_cast<std::size_t>(j) / times_fs.size();
            const std::size_t ti = static_cast<std::size_t>(j) % times_fs.size();
            out[ki][ti] = mode_rdm(mode_ids[ki], times_fs[ti]).entropy();
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace ptwa
