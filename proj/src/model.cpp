#include "ptwa/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ptwa {

namespace {
constexpr double kPi = std::numbers::pi;
}

void SpectralChannel::validate() const {
    if (is_discrete()) {
        const auto& ms = modes();
        for (const auto& m : ms)
            if (m.wavenumber <= 0.0) throw ValidationError("discrete mode frequencies must be positive");
        for (std::size_t i = 0; i < ms.size(); ++i)
            for (std::size_t j = i + 1; j < ms.size(); ++j)
                if (ms[i].wavenumber == ms[j].wavenumber)
                    throw ValidationError("discrete mode frequencies must be distinct");
    } else {
        const auto& dl = drude_lorentz();
        if (dl.lambda <= 0.0) throw ValidationError("Drude-Lorentz lambda must be positive");
        if (dl.omega_c <= 0.0) throw ValidationError("Drude-Lorentz omega_c must be positive");
        if (dl.nu_lo < 0.0 || dl.nu_lo >= dl.nu_hi)
            throw ValidationError("Drude-Lorentz window must satisfy 0 <= nu_lo < nu_hi");
    }
}

void BathSpec::validate() const {
    if (temperature < 0.0) throw ValidationError("temperature must be non-negative");
    if (width_rule == WidthRule::thermal && temperature <= 0.0)
        throw ValidationError("thermal width rule requires a positive temperature");
    for (const auto& ch : channels) ch.validate();
}

double BathSpec::sigma_x(double wavenumber) const {
    const double w = units.omega(wavenumber);
    if (width_rule == WidthRule::groundState) return std::sqrt(units.hbar / (2.0 * w));
    const double bho = units.beta_hbar_omega(wavenumber, temperature);
    return std::sqrt(units.hbar / (2.0 * w * std::tanh(0.5 * bho)));
}

double BathSpec::sigma_p(double wavenumber) const { return units.omega(wavenumber) * sigma_x(wavenumber); }

double BathSpec::sigma_xp(double wavenumber) const {
    if (width_rule == WidthRule::groundState) return 0.5 * units.hbar;
    const double bho = units.beta_hbar_omega(wavenumber, temperature);
    return 0.5 * units.hbar / std::tanh(0.5 * bho);
}

void SystemModel::validate() const {
    const int m = dimension();
    if (m < 1) throw ValidationError("system needs at least one state");
    if (couplings.rows() != m || couplings.cols() != m)
        throw ValidationError("coupling matrix dimension mismatch");
    if (channel_coefficients.rows() != m)
        throw ValidationError("channel coefficient row count must equal the state count");
    for (int i = 0; i < m; ++i) {
        if (std::abs(couplings(i, i)) > 1e-12) throw ValidationError("couplings must have zero diagonal");
        for (int j = 0; j < m; ++j)
            if (std::abs(couplings(i, j) - std::conj(couplings(j, i))) > 1e-12)
                throw ValidationError("couplings must be Hermitian");
    }
}

Eigen::VectorXd SystemModel::state_reorganization(const Eigen::VectorXd& channel_lambdas) const {
    if (channel_lambdas.size() != channel_coefficients.cols())
        throw ValidationError("channel lambda count mismatch");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(dimension());
    for (int n = 0; n < dimension(); ++n)
        for (int c = 0; c < channel_coefficients.cols(); ++c)
            out[n] += channel_coefficients(n, c) * channel_coefficients(n, c) * channel_lambdas[c];
    return out;
}

Eigen::VectorXd SystemModel::minimum_energies(const Eigen::VectorXd& channel_lambdas) const {
    return energies - state_reorganization(channel_lambdas);
}

void InitialSystemDensity::validate() const {
    if (rho.rows() != rho.cols()) throw ValidationError("initial density must be square");
    if (std::abs(rho.trace() - 1.0) > 1e-12) throw ValidationError("initial density must have unit trace");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw ValidationError("initial density must be Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-12)
        throw ValidationError("initial density must be positive semidefinite");
}

EigenBasisModel diagonalize_system(const SystemModel& model, const Eigen::VectorXd& channel_lambdas) {
    model.validate();
    const int m = model.dimension();
    if (m < 2) throw ValidationError("diagonalize_system needs at least two states");

    Eigen::MatrixXcd h = model.couplings;
    for (int n = 0; n < m; ++n) h(n, n) = model.energies[n];

    EigenBasisModel out;
    if (model.couplings.cwiseAbs().maxCoeff() == 0.0) {
        // Already diagonal: identity rotation, states ordered by (energy, index).
        std::vector<int> order(m);
        for (int i = 0; i < m; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return model.energies[a] < model.energies[b]; });
        out.eigen_energies.resize(m);
        out.coefficients = Eigen::MatrixXcd::Zero(m, m);
        for (int a = 0; a < m; ++a) {
            out.eigen_energies[a] = model.energies[order[a]];
            out.coefficients(order[a], a) = 1.0;
        }
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
        if (es.info() != Eigen::Success) throw NumericalGuardError("system diagonalization failed");
        out.eigen_energies = es.eigenvalues();
        out.coefficients = es.eigenvectors();
        // Fix the eigenvector phase: largest-magnitude component real positive.
        for (int a = 0; a < m; ++a) {
            int imax = 0;
            es.eigenvectors().col(a).cwiseAbs().maxCoeff(&imax);
            const cplx pivot = out.coefficients(imax, a);
            if (std::abs(pivot) > 0.0) out.coefficients.col(a) *= std::conj(pivot) / std::abs(pivot);
        }
    }

    // G^(c)_{ab} = sum_n c_n^a c_n^b* g_n^(c).
    const int nch = model.channel_count();
    out.channel_projections.resize(nch);
    for (int c = 0; c < nch; ++c) {
        Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(m, m);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                for (int n = 0; n < m; ++n)
                    g(a, b) += out.coefficients(n, a) * std::conj(out.coefficients(n, b)) *
                               model.channel_coefficients(n, c);
        out.channel_projections[c] = g;
    }

    if (channel_lambdas.size() != nch) throw ValidationError("channel lambda count mismatch");
    out.eigen_energies_minimum = out.eigen_energies;
    for (int a = 0; a < m; ++a)
        for (int c = 0; c < nch; ++c) {
            const double gaa = out.channel_projections[c](a, a).real();
            out.eigen_energies_minimum[a] -= gaa * gaa * channel_lambdas[c];
        }
    return out;
}

SpectralChannel discretize_channel(const SpectralChannel& ch, int K, double omega_max,
                                   DiscretizationScheme scheme) {
    if (ch.is_discrete()) throw ValidationError("discretize_channel expects a continuous channel");
    if (K < 1) throw ValidationError("discretize_channel: K must be at least 1");
    if (omega_max <= 0.0) throw ValidationError("discretize_channel: omega_max must be positive");
    (void)scheme;

    const auto& dl = ch.drude_lorentz();
    const double lo = std::max(0.0, dl.nu_lo);
    const double hi = std::min(dl.nu_hi, omega_max);
    if (lo >= hi) throw ValidationError("discretize_channel: window and omega_max leave no modes");

    // Midpoint nodes of K equal bins over (0, omega_max]; modes outside the
    // channel window are dropped. Midpoint sampling reproduces the Ohmic
    // 1/omega weight of the sine transform exactly (square-wave identity),
    // which equal right-endpoint sampling does not.
    const double dw = omega_max / K;
    std::vector<DiscreteMode> modes;
    std::vector<double> lambdas;
    double lambda_sum = 0.0;
    for (int k = 0; k < K; ++k) {
        const double w = (k + 0.5) * dw;
        if (w < lo || w > hi) continue;
        const double lam = dl.value(w) * dw / (kPi * w);
        modes.push_back({w, 0.0});
        lambdas.push_back(lam);
        lambda_sum += lam;
    }
    if (modes.empty()) {
        // Degenerate discretization: one mode at the window midpoint.
        modes.push_back({0.5 * (lo + hi), 0.0});
        lambdas.push_back(1.0);
        lambda_sum = 1.0;
    }
    const double target = windowed_reorganization(dl, lo, hi);
    const double scale = target / lambda_sum;
    UnitSystem units;
    for (std::size_t k = 0; k < modes.size(); ++k) {
        const double lam = lambdas[k] * scale;
        const double w = units.omega(modes[k].wavenumber);
        modes[k].displacement = std::sqrt(2.0 * lam) / w;
    }
    return SpectralChannel{modes};
}

std::pair<double, double> suppression_cutoffs(double lambda, double omega_c, double alpha) {
    if (lambda <= 0.0 || omega_c <= 0.0) throw ValidationError("suppression_cutoffs: bad spectral density");
    if (alpha <= 0.0 || alpha >= 1.0) throw ValidationError("suppression_cutoffs: alpha must lie in (0, 1)");
    const double nu_h = omega_c * std::tan(0.5 * kPi * alpha);
    const double nu_l = omega_c * std::tan(0.5 * kPi * (1.0 - alpha));
    return {nu_h, nu_l};
}

double windowed_reorganization(const DrudeLorentz& dl, double nu_lo, double nu_hi) {
    const double lo = std::max(nu_lo, 0.0);
    const double alo = std::atan(lo / dl.omega_c);
    const double ahi = std::isfinite(nu_hi) ? std::atan(nu_hi / dl.omega_c) : 0.5 * kPi;
    return 2.0 * dl.lambda / kPi * (ahi - alo);
}

double channel_reorganization(const SpectralChannel& ch, const UnitSystem& units) {
    if (ch.is_discrete()) {
        double acc = 0.0;
        for (const auto& m : ch.modes()) acc += m.reorganization(units);
        return acc;
    }
    const auto& dl = ch.drude_lorentz();
    return windowed_reorganization(dl, dl.nu_lo, dl.nu_hi);
}

}  // namespace ptwa
