#include "ptwa/oracle.hpp"

#include <cmath>

namespace ptwa {

namespace {

/// Mixed-radix helpers over (system, mode_1, ..., mode_K) indices.
struct Radix {
    int system_dim;
    std::vector<int> fock;
    long dim;

    long stride_after(std::size_t k) const {
        long s = 1;
        for (std::size_t j = k + 1; j < fock.size(); ++j) s *= fock[j];
        return s;
    }
};

}  // namespace

DenseModel build_hamiltonian(const SystemModel& model, const std::vector<OracleMode>& modes,
                             const UnitSystem& units) {
    model.validate();
    const int M = model.dimension();
    long dim = M;
    for (const auto& m : modes) {
        if (m.fock_dim < 1) throw ValidationError("oracle mode needs at least one Fock level");
        if (m.wavenumber <= 0.0) throw ValidationError("oracle mode frequency must be positive");
        if (m.state_displacement.size() != M)
            throw ValidationError("oracle mode displacement vector length must equal the state count");
        dim *= m.fock_dim;
    }
    if (dim > 20000) throw ValidationError("dense model dimension exceeds the 20000 guard");

    DenseModel out;
    out.system_dim = M;
    out.modes = modes;
    out.dim = dim;
    out.units = units;
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim, dim);

    Radix radix{M, {}, dim};
    for (const auto& m : modes) radix.fock.push_back(m.fock_dim);
    const long env_dim = dim / M;

    // Decode a flat index into (s, q_1..q_K).
    auto decode = [&](long idx, int& s, std::vector<int>& q) {
        long rem = idx;
        for (std::size_t k = modes.size(); k-- > 0;) {
            q[k] = static_cast<int>(rem % modes[k].fock_dim);
            rem /= modes[k].fock_dim;
        }
        s = static_cast<int>(rem);
    };

    std::vector<int> q(modes.size());
    for (long i = 0; i < dim; ++i) {
        int s;
        decode(i, s, q);
        // Diagonal: state energy at the origin plus oscillator ladders.
        double diag = model.energies[s];
        for (std::size_t k = 0; k < modes.size(); ++k)
            diag += modes[k].wavenumber * (q[k] + 0.5);
        H(i, i) += diag;
        // System couplings act on the system factor only.
        for (int sp = 0; sp < M; ++sp) {
            if (sp == s) continue;
            const cplx delta = model.couplings(sp, s);
            if (delta != cplx(0.0, 0.0)) {
                const long j = i + static_cast<long>(sp - s) * env_dim;
                H(j, i) += delta;
            }
        }
        // Displacement coupling: -w^2 x0^(s) x_k, with x = l (a + a+)/sqrt(2),
        // l = sqrt(hbar/w); matrix element w^2 x0 l sqrt(q+1)/sqrt(2).
        for (std::size_t k = 0; k < modes.size(); ++k) {
            if (q[k] + 1 >= modes[k].fock_dim) continue;
            const double x0 = modes[k].state_displacement[s];
            if (x0 == 0.0) continue;
            const double w = units.omega(modes[k].wavenumber);
            const double ell = std::sqrt(units.hbar / w);
            const double elem = -w * w * x0 * ell * std::sqrt(0.5 * (q[k] + 1.0));
            const long j = i + radix.stride_after(k);
            H(j, i) += elem;
            H(i, j) += elem;
        }
    }
    if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw NumericalGuardError("dense Hamiltonian lost Hermiticity");
    out.hamiltonian = std::move(H);
    return out;
}

Eigen::VectorXd thermal_fock_weights(double wavenumber, double temperature_K, int dim,
                                     const UnitSystem& units) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
    if (temperature_K <= 0.0) {
        w[0] = 1.0;
        return w;
    }
    const double bho = units.beta_hbar_omega(wavenumber, temperature_K);
    for (int q = 0; q < dim; ++q) w[q] = std::exp(-bho * (q + 0.5));
    w /= w.sum();
    return w;
}

int thermal_fock_dim(double wavenumber, double temperature_K, const UnitSystem& units) {
    if (temperature_K <= 0.0) return 1;
    const double bho = units.beta_hbar_omega(wavenumber, temperature_K);
    const double z = std::exp(-bho);
    // Cumulative weight of levels 0..d-1 is 1 - z^d.
    int d = 1;
    double tail = z;
    while (tail > 1e-10 && d < 10000) {
        tail *= z;
        ++d;
    }
    return d;
}

OracleResult propagate(const DenseModel& dense, const Eigen::MatrixXcd& rho_sys0,
                       double temperature_K, std::span<const double> times,
                       const OracleOptions& options) {
    const int M = dense.system_dim;
    const long dim = dense.dim;
    if (rho_sys0.rows() != M || rho_sys0.cols() != M)
        throw ValidationError("oracle: system density dimension mismatch");
    {
        InitialSystemDensity check{rho_sys0};
        check.validate();
    }

    // rho0 = rho_sys (x) prod_k diag(thermal weights).
    const long env_dim = dim / M;
    Eigen::VectorXd env_weights = Eigen::VectorXd::Ones(env_dim);
    {
        std::vector<Eigen::VectorXd> per_mode;
        for (const auto& m : dense.modes)
            per_mode.push_back(thermal_fock_weights(m.wavenumber, temperature_K, m.fock_dim, dense.units));
        for (long e = 0; e < env_dim; ++e) {
            long rem = e;
            double w = 1.0;
            for (std::size_t k = dense.modes.size(); k-- > 0;) {
                w *= per_mode[k][static_cast<int>(rem % dense.modes[k].fock_dim)];
                rem /= dense.modes[k].fock_dim;
            }
            env_weights[e] = w;
        }
    }
    Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(dim, dim);
    for (int s = 0; s < M; ++s)
        for (int sp = 0; sp < M; ++sp)
            for (long e = 0; e < env_dim; ++e)
                rho0(s * env_dim + e, sp * env_dim + e) = rho_sys0(s, sp) * env_weights[e];

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense.hamiltonian);
    if (es.info() != Eigen::Success) throw NumericalGuardError("oracle diagonalization failed");
    const Eigen::MatrixXcd& V = es.eigenvectors();
    const Eigen::VectorXd& E = es.eigenvalues();
    const Eigen::MatrixXcd psi = V.adjoint() * rho0 * V;

    OracleResult out;
    out.times.assign(times.begin(), times.end());
    out.system_rdm.reserve(times.size());

    for (const double t : times) {
        Eigen::VectorXcd u(dim);
        for (long i = 0; i < dim; ++i)
            u[i] = std::exp(cplx(0.0, -E[i] * t / dense.units.hbar));
        const Eigen::MatrixXcd W = V * u.asDiagonal();
        const Eigen::MatrixXcd rho = W * psi * W.adjoint();

        out.global_trace.push_back(rho.trace().real());
        out.hermiticity_defect.push_back((rho - rho.adjoint()).cwiseAbs().maxCoeff());
        out.energy.push_back((dense.hamiltonian * rho).trace().real());

        Eigen::MatrixXcd sys = Eigen::MatrixXcd::Zero(M, M);
        for (int s = 0; s < M; ++s)
            for (int sp = 0; sp < M; ++sp)
                for (long e = 0; e < env_dim; ++e) sys(s, sp) += rho(s * env_dim + e, sp * env_dim + e);
        out.system_rdm.push_back(sys);

        if (options.mode_rdms) {
            std::vector<Eigen::MatrixXcd> rdms;
            for (std::size_t k = 0; k < dense.modes.size(); ++k) {
                const int dk = dense.modes[k].fock_dim;
                long inner = 1;
                for (std::size_t j = k + 1; j < dense.modes.size(); ++j) inner *= dense.modes[j].fock_dim;
                long outer = M;
                for (std::size_t j = 0; j < k; ++j) outer *= dense.modes[j].fock_dim;
                Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(dk, dk);
                for (long o = 0; o < outer; ++o)
                    for (int a = 0; a < dk; ++a)
                        for (int b = 0; b < dk; ++b)
                            for (long i = 0; i < inner; ++i)
                                r(a, b) += rho((o * dk + a) * inner + i, (o * dk + b) * inner + i);
                rdms.push_back(std::move(r));
            }
            out.mode_rdm.push_back(std::move(rdms));
        }
        if (options.environment_rdm) {
            Eigen::MatrixXcd env = Eigen::MatrixXcd::Zero(env_dim, env_dim);
            for (long a = 0; a < env_dim; ++a)
                for (long b = 0; b < env_dim; ++b)
                    for (int s = 0; s < M; ++s) env(a, b) += rho(s * env_dim + a, s * env_dim + b);
            out.environment_rdm.push_back(std::move(env));
        }
    }
    return out;
}

}  // namespace ptwa
