#include "ptwa/corr.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ptwa {

namespace {
constexpr double kPi = std::numbers::pi;

double cos_minus_one(double x) {
    // Cancellation-free cos(x) - 1 for the small arguments the G-difference
    // integrand hits near w -> 0.
    const double s = std::sin(0.5 * x);
    return -2.0 * s * s;
}
}  // namespace

ChannelKernels::ChannelKernels(const SpectralChannel& channel, const BathSpec& bath,
                               std::size_t channel_index, double t_max_hint) {
    hbar_ = bath.units.hbar;
    if (channel.is_discrete()) {
        discrete_ = true;
        const auto& ms = channel.modes();
        modes_.reserve(ms.size());
        for (std::size_t k = 0; k < ms.size(); ++k) {
            ModeTerm term;
            term.omega = bath.units.omega(ms[k].wavenumber);
            term.d = ms[k].displacement;
            term.d2 = term.d * term.d;
            term.sigma_xp = bath.sigma_xp(ms[k].wavenumber);
            const WignerCenter c = bath.center(channel_index, k);
            term.cx = c.x;
            term.cp = c.p;
            modes_.push_back(term);
        }
        return;
    }

    const auto& dl = channel.drude_lorentz();
    closed_form_h_ = (dl.nu_lo <= 0.0 && !std::isfinite(dl.nu_hi));
    cf_lambda_ = dl.lambda;
    cf_omega_c_ = bath.units.omega(dl.omega_c);

    const double lo = bath.units.omega(std::max(dl.nu_lo, 0.0));
    const double hi = bath.units.omega(std::min(dl.nu_hi, 20.0 * dl.omega_c));
    if (lo >= hi) throw ValidationError("spectral window is empty after truncation");
    // Keep a few panels per oscillation of cos(w t_max) across the span.
    const int panels = std::max(125, static_cast<int>(std::ceil((hi - lo) * t_max_hint / (4.0 * kPi))));
    rule_ = composite_gauss_legendre(panels, 16, lo, hi);
    j_over_w2_.resize(rule_.nodes.size());
    sigma_xp_w_.resize(rule_.nodes.size());
    for (std::size_t i = 0; i < rule_.nodes.size(); ++i) {
        const double w = rule_.nodes[i];
        const double wavenumber = w * bath.units.hbar;
        j_over_w2_[i] = dl.value(wavenumber) / (w * w);
        sigma_xp_w_[i] = bath.sigma_xp(wavenumber);
    }
}

double ChannelKernels::h(double t) const {
    if (discrete_) {
        double acc = 0.0;
        for (const auto& m : modes_) acc += 0.5 * m.omega * m.d2 * std::sin(m.omega * t);
        return acc;
    }
    if (closed_form_h_) {
        const double sgn = t < 0.0 ? -1.0 : 1.0;
        return sgn * (cf_lambda_ / cf_omega_c_) * (1.0 - std::exp(-cf_omega_c_ * std::abs(t)));
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < rule_.nodes.size(); ++i)
        acc += rule_.weights[i] * j_over_w2_[i] * std::sin(rule_.nodes[i] * t);
    return acc / kPi;
}

double ChannelKernels::dg(double t) const {
    if (discrete_) {
        double acc = 0.0;
        for (const auto& m : modes_)
            acc += (m.sigma_xp * m.omega * m.d2 / hbar_) * cos_minus_one(m.omega * t);
        return acc;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < rule_.nodes.size(); ++i)
        acc += rule_.weights[i] * sigma_xp_w_[i] * j_over_w2_[i] * cos_minus_one(rule_.nodes[i] * t);
    return 2.0 * acc / (kPi * hbar_);
}

double ChannelKernels::g_absolute(double t) const {
    if (!discrete_)
        throw ValidationError("standalone G(t) is finite only for discrete channels; use differences");
    double acc = 0.0;
    for (const auto& m : modes_) acc += (m.sigma_xp * m.omega * m.d2 / hbar_) * std::cos(m.omega * t);
    return acc;
}

double ChannelKernels::iB(double t) const {
    if (discrete_) {
        double acc = 0.0;
        for (const auto& m : modes_)
            acc += (m.sigma_xp * m.omega * m.omega * m.d2 / hbar_) * std::sin(m.omega * t);
        return acc;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < rule_.nodes.size(); ++i) {
        const double w = rule_.nodes[i];
        acc += rule_.weights[i] * sigma_xp_w_[i] * j_over_w2_[i] * w * std::sin(w * t);
    }
    return 2.0 * acc / (kPi * hbar_);
}

double ChannelKernels::jkB(double t) const {
    if (discrete_) {
        double acc = 0.0;
        for (const auto& m : modes_) acc += m.omega * m.omega * m.d2 * std::cos(m.omega * t);
        return acc;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < rule_.nodes.size(); ++i) {
        const double w = rule_.nodes[i];
        acc += rule_.weights[i] * j_over_w2_[i] * w * std::cos(w * t);
    }
    return 2.0 * acc / kPi;
}

double ChannelKernels::lB(double t) const {
    if (discrete_) {
        double acc = 0.0;
        for (const auto& m : modes_)
            acc += m.sigma_xp * m.omega * m.omega * m.omega * m.d2 * std::cos(m.omega * t);
        return acc;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < rule_.nodes.size(); ++i) {
        const double w = rule_.nodes[i];
        acc += rule_.weights[i] * sigma_xp_w_[i] * j_over_w2_[i] * w * w * std::cos(w * t);
    }
    return 2.0 * acc / kPi;
}

double ChannelKernels::mB(double t) const {
    if (discrete_) {
        double acc = 0.0;
        for (const auto& m : modes_)
            acc += hbar_ * m.omega * m.omega * m.omega * m.d2 * std::sin(m.omega * t);
        return acc;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < rule_.nodes.size(); ++i) {
        const double w = rule_.nodes[i];
        acc += rule_.weights[i] * j_over_w2_[i] * w * w * std::sin(w * t);
    }
    return 2.0 * hbar_ * acc / kPi;
}

double ChannelKernels::wpx(double t) const {
    double acc = 0.0;
    for (const auto& m : modes_) acc += m.omega * m.d * m.cx * std::sin(m.omega * t);
    return acc;
}

double ChannelKernels::wpp(double t) const {
    double acc = 0.0;
    for (const auto& m : modes_) acc += m.d * m.cp * std::cos(m.omega * t);
    return acc;
}

double ChannelKernels::cB(double t) const {
    double acc = 0.0;
    for (const auto& m : modes_)
        acc += m.omega * m.omega * m.d * (m.cx * std::cos(m.omega * t) + m.cp / m.omega * std::sin(m.omega * t));
    return acc;
}

BathKernels::BathKernels(const BathSpec& bath, double t_max_hint) : units_(bath.units) {
    bath.validate();
    channels_.reserve(bath.channels.size());
    for (std::size_t c = 0; c < bath.channels.size(); ++c)
        channels_.emplace_back(bath.channels[c], bath, c, t_max_hint);
}

KernelTable::KernelTable(const BathKernels& kernels, double t_max, int grid_points)
    : dt_(t_max / grid_points), t_max_(t_max), grid_points_(grid_points),
      nch_(kernels.channel_count()), units_(kernels.units()) {
    if (grid_points < 2) throw ValidationError("kernel table needs at least two grid intervals");
    if (t_max <= 0.0) throw ValidationError("kernel table needs a positive horizon");
    tab_.resize(nch_);
    for (std::size_t c = 0; c < nch_; ++c) {
        auto& tb = tab_[c];
        const auto& ck = kernels.channel(c);
        const std::size_t n = static_cast<std::size_t>(grid_points_) + 1;
        tb.h.resize(n);
        tb.dg.resize(n);
        tb.iB.resize(n);
        tb.jkB.resize(n);
        tb.lB.resize(n);
        tb.mB.resize(n);
        tb.wpx.assign(n, 0.0);
        tb.wpp.assign(n, 0.0);
        tb.cB.assign(n, 0.0);
        tb.centered = false;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = dt_ * static_cast<double>(i);
            tb.h[i] = ck.h(t);
            tb.dg[i] = ck.dg(t);
            tb.iB[i] = ck.iB(t);
            tb.jkB[i] = ck.jkB(t);
            tb.lB[i] = ck.lB(t);
            tb.mB[i] = ck.mB(t);
            if (ck.is_discrete()) {
                tb.wpx[i] = ck.wpx(t);
                tb.wpp[i] = ck.wpp(t);
                tb.cB[i] = ck.cB(t);
            }
        }
        for (std::size_t i = 0; i < n && !tb.centered; ++i)
            tb.centered = tb.wpx[i] != 0.0 || tb.wpp[i] != 0.0 || tb.cB[i] != 0.0;
    }
}

BasisCoefficients BasisCoefficients::local_basis(const SystemModel& model, const BathSpec& bath) {
    model.validate();
    if (static_cast<std::size_t>(model.channel_count()) != bath.channels.size())
        throw ValidationError("channel count mismatch between system and bath");
    BasisCoefficients out;
    Eigen::VectorXd lambdas(model.channel_count());
    for (int c = 0; c < model.channel_count(); ++c)
        lambdas[c] = channel_reorganization(bath.channels[c], bath.units);
    out.energies_min = model.minimum_energies(lambdas);
    const int m = model.dimension();
    for (int c = 0; c < model.channel_count(); ++c) {
        Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(m, m);
        for (int n = 0; n < m; ++n) a(n, n) = model.channel_coefficients(n, c);
        out.pair.push_back(a);
        out.diag.push_back(model.channel_coefficients.col(c));
    }
    return out;
}

BasisCoefficients BasisCoefficients::eigen_basis(const EigenBasisModel& eigen) {
    BasisCoefficients out;
    out.energies_min = eigen.eigen_energies_minimum;
    for (const auto& g : eigen.channel_projections) {
        out.pair.push_back(g);
        out.diag.push_back(g.diagonal().real());
    }
    return out;
}

double StateKernels::h_kernel(int a, int b, int c, int d, double t) const {
    double acc = 0.0;
    for (std::size_t ch = 0; ch < kernels_->channel_count(); ++ch) {
        const auto& dg = coeffs_.diag[ch];
        acc += (dg[a] - dg[b]) * (dg[c] + dg[d]) * kernels_->channel(ch).h(t);
    }
    return acc;
}

double StateKernels::g_kernel_diff(int a, int b, int c, int d, double t1, double t2) const {
    double acc = 0.0;
    for (std::size_t ch = 0; ch < kernels_->channel_count(); ++ch) {
        const auto& dg = coeffs_.diag[ch];
        acc += (dg[a] - dg[b]) * (dg[c] - dg[d]) *
               (kernels_->channel(ch).dg(t1) - kernels_->channel(ch).dg(t2));
    }
    return acc;
}

double StateKernels::g_kernel_discrete(int a, int b, int c, int d, double t) const {
    double acc = 0.0;
    for (std::size_t ch = 0; ch < kernels_->channel_count(); ++ch) {
        const auto& dg = coeffs_.diag[ch];
        acc += (dg[a] - dg[b]) * (dg[c] - dg[d]) * kernels_->channel(ch).g_absolute(t);
    }
    return acc;
}

void StateKernels::check_times(const LiouvillePathway& p, std::span<const double> times) const {
    if (times.size() != p.pairs.size() + 1)
        throw ValidationError("time list must hold tau_0..tau_{N+1}");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (times[i] < times[i - 1]) throw ValidationError("interaction times must be non-decreasing");
}

cplx StateKernels::phi_H(const LiouvillePathway& p, std::span<const double> times) const {
    check_times(p, times);
    const int N = p.order();
    const double hbar = kernels_->units().hbar;
    double acc = 0.0;  // phi_H = i * acc / hbar
    for (std::size_t ch = 0; ch < kernels_->channel_count(); ++ch) {
        const auto& dgv = coeffs_.diag[ch];
        const auto& ck = kernels_->channel(ch);
        for (int j = 0; j <= N; ++j) {
            const auto [nj, njp] = p.pairs[j];
            acc -= (dgv[nj] - dgv[njp]) * (dgv[nj] + dgv[njp]) * ck.h(times[j + 1] - times[j]);
            for (int l = 0; l < j; ++l) {
                const auto [nl, nlp] = p.pairs[l];
                const double coef = (dgv[nj] - dgv[njp]) * (dgv[nl] + dgv[nlp]);
                acc += coef * (ck.h(times[j + 1] - times[l + 1]) - ck.h(times[j + 1] - times[l]) +
                               ck.h(times[j] - times[l]) - ck.h(times[j] - times[l + 1]));
            }
        }
    }
    return cplx(0.0, acc / hbar);
}

double StateKernels::phi_G(const LiouvillePathway& p, std::span<const double> times) const {
    check_times(p, times);
    const int N = p.order();
    const double hbar = kernels_->units().hbar;
    double acc = 0.0;
    for (std::size_t ch = 0; ch < kernels_->channel_count(); ++ch) {
        const auto& dgv = coeffs_.diag[ch];
        const auto& ck = kernels_->channel(ch);
        for (int j = 0; j <= N; ++j) {
            const auto [nj, njp] = p.pairs[j];
            const double dj = dgv[nj] - dgv[njp];
            acc += dj * dj * ck.dg(times[j + 1] - times[j]);
            for (int l = 0; l < j; ++l) {
                const auto [nl, nlp] = p.pairs[l];
                const double coef = dj * (dgv[nl] - dgv[nlp]);
                acc -= coef * (ck.dg(times[j + 1] - times[l + 1]) - ck.dg(times[j + 1] - times[l]) +
                               ck.dg(times[j] - times[l]) - ck.dg(times[j] - times[l + 1]));
            }
        }
    }
    return acc / hbar;
}

cplx StateKernels::phi_tot(const LiouvillePathway& p, std::span<const double> times) const {
    return phi_H(p, times) + phi_G(p, times);
}

double StateKernels::center_phase(const LiouvillePathway& p, std::span<const double> times) const {
    check_times(p, times);
    const int N = p.order();
    const double hbar = kernels_->units().hbar;
    double acc = 0.0;
    for (std::size_t ch = 0; ch < kernels_->channel_count(); ++ch) {
        const auto& dgv = coeffs_.diag[ch];
        const auto& ck = kernels_->channel(ch);
        if (!ck.is_discrete()) continue;
        for (int j = 0; j <= N; ++j) {
            const auto [nj, njp] = p.pairs[j];
            const double dj = dgv[nj] - dgv[njp];
            acc += dj * (ck.wpx(times[j + 1]) - ck.wpx(times[j]));
            acc -= dj * (ck.wpp(times[j + 1]) - ck.wpp(times[j]));
        }
    }
    return acc / hbar;
}

cplx appendix_kernel(AppendixKernel tag, const BathKernels& kernels, const BasisCoefficients& coeffs,
                     int a, int b, int c, int d, double t) {
    cplx acc = 0.0;
    for (std::size_t ch = 0; ch < kernels.channel_count(); ++ch) {
        const auto& A = coeffs.pair[ch];
        const auto& dgv = coeffs.diag[ch];
        const auto& ck = kernels.channel(ch);
        switch (tag) {
            case AppendixKernel::I:
                acc += A(a, b) * (dgv[c] - dgv[d]) * ck.iB(t);
                break;
            case AppendixKernel::J:
                acc += A(a, b) * 0.5 * (dgv[c] + dgv[d]) * ck.jkB(t);
                break;
            case AppendixKernel::K:
                acc += A(a, b) * (dgv[c] - dgv[d]) * ck.jkB(t);
                break;
            case AppendixKernel::L:
                acc += A(a, b) * A(c, d) * ck.lB(t);
                break;
            case AppendixKernel::M:
                acc += A(a, b) * A(c, d) * ck.mB(t);
                break;
        }
    }
    return acc;
}

std::vector<BathMode> flatten_discrete(const BathSpec& bath) {
    std::vector<BathMode> out;
    for (std::size_t c = 0; c < bath.channels.size(); ++c) {
        const auto& ch = bath.channels[c];
        if (!ch.is_discrete())
            throw ValidationError("operation requires a discrete bath (discretize continuum channels first)");
        const auto& ms = ch.modes();
        for (std::size_t k = 0; k < ms.size(); ++k) {
            BathMode m;
            m.omega = bath.units.omega(ms[k].wavenumber);
            m.d = ms[k].displacement;
            m.sigma_x = bath.sigma_x(ms[k].wavenumber);
            m.sigma_p = bath.sigma_p(ms[k].wavenumber);
            m.sigma_xp = bath.sigma_xp(ms[k].wavenumber);
            const WignerCenter wc = bath.center(c, k);
            m.cx = wc.x;
            m.cp = wc.p;
            m.channel = c;
            out.push_back(m);
        }
    }
    return out;
}

ModeGeometry mode_geometry(const BathMode& mode, const BasisCoefficients& coeffs) {
    ModeGeometry g;
    g.omega = mode.omega;
    g.state_displacement = coeffs.diag[mode.channel] * mode.d;
    return g;
}

std::pair<double, double> classical_trajectory(const LiouvillePathway& p, std::span<const double> times,
                                               const ModeGeometry& geom, double x0, double p0, int segment,
                                               double s) {
    if (segment < 0 || segment > p.order()) throw ValidationError("classical_trajectory: bad segment");
    if (s < times[segment] - 1e-12 || s > times[segment + 1] + 1e-12)
        throw ValidationError("classical_trajectory: s outside the segment");
    const double w = geom.omega;
    double x = x0 * std::cos(w * s) + p0 / w * std::sin(w * s);
    double v = -x0 * w * std::sin(w * s) + p0 * std::cos(w * s);
    const double xbar_j = geom.mean_shift(p.pairs[segment]);
    x += xbar_j * (1.0 - std::cos(w * (s - times[segment])));
    v += xbar_j * w * std::sin(w * (s - times[segment]));
    for (int l = 0; l < segment; ++l) {
        const double xbar = geom.mean_shift(p.pairs[l]);
        x += xbar * (std::cos(w * (s - times[l + 1])) - std::cos(w * (s - times[l])));
        v += xbar * w * (-std::sin(w * (s - times[l + 1])) + std::sin(w * (s - times[l])));
    }
    return {x, v};
}

double integrated_trajectory(const LiouvillePathway& p, std::span<const double> times,
                             const ModeGeometry& geom, double x0, double p0, int segment) {
    if (segment < 0 || segment > p.order()) throw ValidationError("integrated_trajectory: bad segment");
    const double w = geom.omega;
    const double ta = times[segment], tb = times[segment + 1];
    double acc = x0 / w * (std::sin(w * tb) - std::sin(w * ta));
    acc -= p0 / (w * w) * (std::cos(w * tb) - std::cos(w * ta));
    for (int l = 0; l < segment; ++l) {
        const double xbar = geom.mean_shift(p.pairs[l]);
        acc += xbar / w *
               (std::sin(w * (tb - times[l + 1])) - std::sin(w * (tb - times[l])) +
                std::sin(w * (ta - times[l])) - std::sin(w * (ta - times[l + 1])));
    }
    const double xbar_j = geom.mean_shift(p.pairs[segment]);
    acc += -xbar_j / w * std::sin(w * (tb - ta)) + xbar_j * (tb - ta);
    return acc;
}

}  // namespace ptwa
