#include "ptwa/pathways.hpp"

#include <cmath>

namespace ptwa {

std::vector<ChiMode> chi_modes(const BathSpec& bath, const BasisCoefficients& coeffs) {
    std::vector<ChiMode> out;
    for (const auto& bm : flatten_discrete(bath)) {
        ChiMode m;
        m.geom = mode_geometry(bm, coeffs);
        m.sigma_xp = bm.sigma_xp;
        m.cx = bm.cx;
        m.cp = bm.cp;
        m.d = bm.d;
        m.channel = bm.channel;
        out.push_back(std::move(m));
    }
    return out;
}

cplx theta_helper(const LiouvillePathway& p, std::span<const double> times, const ChiMode& mode, int j,
                  double hbar) {
    const int N = p.order();
    if (j < 1 || j > N) throw ValidationError("theta_helper: step index out of range");
    const double w = mode.geom.omega;
    const double tj = times[j];
    double sines = 0.0;
    for (int l = 0; l <= N; ++l) {
        const double dx = mode.geom.diff_shift(p.pairs[l]);
        sines += dx * (std::sin(w * (times[l + 1] - tj)) - std::sin(w * (times[l] - tj)));
    }
    cplx out = kI * mode.sigma_xp / hbar * sines;
    out += mode.cx * std::cos(w * tj) + mode.cp / w * std::sin(w * tj);
    out += x_nonlocal(p, times, mode, j - 1, tj);
    return out;
}

double zeta_helper(const LiouvillePathway& p, std::span<const double> times, const ChiMode& mode, int j) {
    const int N = p.order();
    if (j < 1 || j > N) throw ValidationError("zeta_helper: step index out of range");
    const double w = mode.geom.omega;
    const double tj = times[j];
    double acc = 0.0;
    for (int l = j; l <= N; ++l) {
        const double dx = mode.geom.diff_shift(p.pairs[l]);
        acc += dx * (std::cos(w * (times[l + 1] - tj)) - std::cos(w * (times[l] - tj)));
    }
    return acc;
}

double x_nonlocal(const LiouvillePathway& p, std::span<const double> times, const ChiMode& mode, int J,
                  double t) {
    const double w = mode.geom.omega;
    double acc = 0.0;
    for (int i = 0; i <= J; ++i) {
        const double xbar = mode.geom.mean_shift(p.pairs[i]);
        acc += xbar * (std::cos(w * (t - times[i + 1])) - std::cos(w * (t - times[i])));
    }
    return acc;
}

StepBracket step_bracket(const LiouvillePathway& p, int j) {
    const auto [n, np] = p.pairs[j];
    const auto [m, mp] = p.pairs[j - 1];
    if (n != m) return {n, m, +1};
    return {mp, np, -1};
}

cplx chi1_direct(const LiouvillePathway& p, std::span<const double> times,
                 std::span<const ChiMode> modes, const BasisCoefficients& coeffs, double hbar) {
    if (p.order() != 1) throw ValidationError("chi1 expects a first-order pathway");
    const StepBracket br = step_bracket(p, 1);
    const int S1 = p.signs[0];
    cplx acc = 0.0;
    for (const auto& m : modes) {
        const double w2 = m.geom.omega * m.geom.omega;
        const cplx x_ab = m.pair_displacement(coeffs, br.a, br.b);
        const cplx factor = theta_helper(p, times, m, 1, hbar) - 0.5 * double(S1) * zeta_helper(p, times, m, 1);
        acc += w2 * x_ab * factor;
    }
    return -double(br.sign) * acc;
}

cplx chi2_direct(const LiouvillePathway& p, std::span<const double> times,
                 std::span<const ChiMode> modes, const BasisCoefficients& coeffs, double hbar) {
    if (p.order() != 2) throw ValidationError("chi2 expects a second-order pathway");
    const StepBracket b1 = step_bracket(p, 1);
    const StepBracket b2 = step_bracket(p, 2);
    const int S1 = p.signs[0];
    const int S2 = p.signs[1];
    const double dtau = times[2] - times[1];

    cplx sum1 = 0.0, sum2 = 0.0, cross = 0.0;
    for (const auto& m : modes) {
        const double w = m.geom.omega;
        const double w2 = w * w;
        const cplx x1 = m.pair_displacement(coeffs, b1.a, b1.b);
        const cplx x2 = m.pair_displacement(coeffs, b2.a, b2.b);
        sum1 += double(b1.sign) * w2 * x1 *
                (theta_helper(p, times, m, 1, hbar) - 0.5 * double(S1) * zeta_helper(p, times, m, 1));
        sum2 += double(b2.sign) * w2 * x2 *
                (theta_helper(p, times, m, 2, hbar) - 0.5 * double(S2) * zeta_helper(p, times, m, 2));
        cross += double(b1.sign) * double(b2.sign) * w2 * w2 * x1 * x2 *
                 (m.sigma_xp / w * std::cos(w * dtau) -
                  kI * hbar / (2.0 * w) * double(S1) * std::sin(w * dtau));
    }
    return sum2 * sum1 + cross;
}

cplx ChiKernelRoute::n_factor(const LiouvillePathway& p, std::span<const long> idx, int j,
                              std::size_t ch) const {
    const int N = p.order();
    const auto& dgv = coeffs_->diag[ch];
    const long ij = idx[j];
    double isum = 0.0, jsum = 0.0, ksum = 0.0;
    for (int i = 0; i <= N; ++i) {
        const auto [ni, nip] = p.pairs[i];
        const double dc = dgv[ni] - dgv[nip];
        if (dc != 0.0) {
            isum += dc * (table_->iB(ch, idx[i + 1] - ij) - table_->iB(ch, idx[i] - ij));
            if (i >= j) ksum += dc * (table_->jkB(ch, idx[i + 1] - ij) - table_->jkB(ch, idx[i] - ij));
        }
        if (i < j) {
            const double mc = 0.5 * (dgv[ni] + dgv[nip]);
            if (mc != 0.0)
                jsum += mc * (table_->jkB(ch, idx[i + 1] - ij) - table_->jkB(ch, idx[i] - ij));
        }
    }
    cplx paren = kI * isum + jsum - 0.5 * double(p.signs[j - 1]) * ksum;
    if (table_->has_centers(ch)) paren += table_->cB(ch, ij);
    return -paren;
}

cplx ChiKernelRoute::chi(const LiouvillePathway& p, std::span<const long> idx) const {
    const int N = p.order();
    const std::size_t nch = table_->channel_count();
    if (N == 1) {
        const StepBracket br = step_bracket(p, 1);
        cplx acc = 0.0;
        for (std::size_t ch = 0; ch < nch; ++ch)
            acc += coeffs_->pair[ch](br.a, br.b) * n_factor(p, idx, 1, ch);
        return double(br.sign) * acc;
    }
    if (N == 2) {
        const StepBracket b1 = step_bracket(p, 1);
        const StepBracket b2 = step_bracket(p, 2);
        cplx n1 = 0.0, n2 = 0.0, cross = 0.0;
        const long didx = idx[2] - idx[1];
        for (std::size_t ch = 0; ch < nch; ++ch) {
            const cplx a1 = coeffs_->pair[ch](b1.a, b1.b);
            const cplx a2 = coeffs_->pair[ch](b2.a, b2.b);
            n1 += a1 * n_factor(p, idx, 1, ch);
            n2 += a2 * n_factor(p, idx, 2, ch);
            cross += a1 * a2 *
                     (table_->lB(ch, didx) - 0.5 * kI * double(p.signs[0]) * table_->mB(ch, didx));
        }
        return double(b1.sign) * double(b2.sign) * (n2 * n1 + cross);
    }
    throw ValidationError("chi weights are derived through second order only");
}

}  // namespace ptwa
