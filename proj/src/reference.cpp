#include "ptwa/reference.hpp"

#include <cmath>

namespace ptwa {

ReferencePath::ReferencePath(const SystemModel& model, const BathSpec& bath,
                             const InitialSystemDensity& rho0, double t_max, int grid_points)
    : M_(model.dimension()), dt_(t_max / grid_points), grid_(grid_points), units_(bath.units),
      bath_(bath), model_(model), rho0_(rho0.rho) {
    model_.validate();
    rho0.validate();
    kernels_ = std::make_unique<BathKernels>(bath_, t_max);
    local_coeffs_ = BasisCoefficients::local_basis(model_, bath_);
    local_kernels_ = std::make_unique<StateKernels>(*kernels_, local_coeffs_);

    bool discrete = true;
    for (const auto& ch : bath_.channels) discrete = discrete && ch.is_discrete();
    if (discrete && M_ >= 2) {
        Eigen::VectorXd lambdas(model_.channel_count());
        for (int c = 0; c < model_.channel_count(); ++c)
            lambdas[c] = channel_reorganization(bath_.channels[c], bath_.units);
        const EigenBasisModel em = diagonalize_system(model_, lambdas);
        eigen_coeffs_ = BasisCoefficients::eigen_basis(em);
        eigen_kernels_ = std::make_unique<StateKernels>(*kernels_, eigen_coeffs_);
        eigvecs_ = em.coefficients;
        rho0_eigen_ = eigvecs_.adjoint() * rho0_ * eigvecs_;
        chi_modes_ = chi_modes(bath_, eigen_coeffs_);
        eigen_ready_ = true;
    }
}

cplx ReferencePath::element(int N, long it, int row, int col, bool eigen) const {
    if (eigen && !eigen_ready_) throw ValidationError("eigen reference needs a discrete bath");
    const StateKernels& sk = eigen ? *eigen_kernels_ : *local_kernels_;
    const Eigen::MatrixXcd& rho0 = eigen ? rho0_eigen_ : rho0_;
    const double hbar = units_.hbar;
    const double t = dt_ * static_cast<double>(it);

    cplx total = 0.0;
    for (const auto& p : enumerate_pathways(M_, N, {row, col})) {
        const cplx rho_el = rho0(p.initial().first, p.initial().second);
        if (rho_el == cplx(0.0, 0.0)) continue;
        const cplx theta = eigen ? cplx(1.0) : theta_envfree(p, model_.couplings);
        if (theta == cplx(0.0, 0.0)) continue;

        auto integrand = [&](std::span<const double> times) {
            cplx x = sk.phi_tot(p, times);
            double e = 0.0;
            for (int j = 0; j <= N; ++j) {
                const auto [nj, njp] = p.pairs[j];
                e += (sk.coefficients().energies_min[nj] - sk.coefficients().energies_min[njp]) *
                     (times[j + 1] - times[j]);
            }
            x += cplx(0.0, -e / hbar);
            x += cplx(0.0, sk.center_phase(p, times));
            cplx f = std::exp(x);
            if (eigen && N == 1)
                f *= chi1_direct(p, times, chi_modes_, eigen_coeffs_, hbar);
            if (eigen && N == 2)
                f *= chi2_direct(p, times, chi_modes_, eigen_coeffs_, hbar);
            return f;
        };

        cplx acc = 0.0;
        const auto w = [this](long i, long m) { return dt_ * ((i == 0 || i == m) ? 0.5 : 1.0); };
        if (N == 0) {
            const double times[2] = {0.0, t};
            acc = integrand(times);
        } else if (N == 1) {
            for (long i1 = 0; it > 0 && i1 <= it; ++i1) {
                const double times[3] = {0.0, dt_ * i1, t};
                acc += w(i1, it) * integrand(times);
            }
        } else if (N == 2) {
            for (long i2 = 1; i2 <= it; ++i2)
                for (long i1 = 0; i1 <= i2; ++i1) {
                    const double times[4] = {0.0, dt_ * i1, dt_ * i2, t};
                    acc += w(i2, it) * w(i1, i2) * integrand(times);
                }
        } else if (N == 3) {
            for (long i3 = 1; i3 <= it; ++i3)
                for (long i2 = 1; i2 <= i3; ++i2)
                    for (long i1 = 0; i1 <= i2; ++i1) {
                        const double times[5] = {0.0, dt_ * i1, dt_ * i2, dt_ * i3, t};
                        acc += w(i3, it) * w(i2, i3) * w(i1, i2) * integrand(times);
                    }
        } else {
            throw ValidationError("reference path supports orders 0..3");
        }
        total += rho_el * theta * acc;
    }
    cplx pref = 1.0;
    for (int n = 0; n < N; ++n) pref *= cplx(0.0, -1.0) / units_.hbar;
    return pref * total;
}

cplx ReferencePath::local_rdm_order(int N, long it, int row, int col) const {
    return element(N, it, row, col, false);
}

cplx ReferencePath::eigen_rdm_order(int N, long it, int row, int col) const {
    return element(N, it, row, col, true);
}

}  // namespace ptwa
