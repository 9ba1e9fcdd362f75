#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ptwa/envmode.hpp"
#include "ptwa/oracle.hpp"

using namespace ptwa;

namespace {

SystemModel donor_acceptor(double gap_origin0, double gap_origin1, double delta) {
    SystemModel m;
    m.energies = Eigen::Vector2d(gap_origin0, gap_origin1);
    m.couplings = Eigen::MatrixXcd::Zero(2, 2);
    m.couplings(0, 1) = delta;
    m.couplings(1, 0) = delta;
    m.channel_coefficients = Eigen::MatrixXd(2, 1);
    m.channel_coefficients << 0.0, 1.0;
    return m;
}

/// Fig.-4-style single mode: resonant gap, lambda on the acceptor.
struct Fig4 {
    SystemModel model;
    OracleMode mode;
    Eigen::MatrixXcd rho0;
};

Fig4 fig4_setup(double delta, int fock_dim) {
    UnitSystem u;
    const double w0 = 500.0, lambda = 25.0;
    const double d = std::sqrt(2.0 * lambda) / u.omega(w0);
    Fig4 s;
    s.model = donor_acceptor(w0, lambda, delta);
    s.mode = OracleMode{w0, Eigen::Vector2d(0.0, d), fock_dim};
    s.rho0 = Eigen::MatrixXcd::Zero(2, 2);
    s.rho0(0, 0) = 1.0;
    return s;
}

}  // namespace

TEST_CASE("build_hamiltonian: block structure and separable limits") {
    UnitSystem u;
    // Delta = 0, single mode: block-diagonal per system state.
    {
        Fig4 s = fig4_setup(0.0, 8);
        const DenseModel dense = build_hamiltonian(s.model, {s.mode}, u);
        const int d = 8;
        for (int q = 0; q < d; ++q)
            for (int qp = 0; qp < d; ++qp)
                CHECK(std::abs(dense.hamiltonian(q, d + qp)) == 0.0);
    }
    // x0 = 0: separable; eigenvalues are eps-tilde_n + hbar w (q + 1/2).
    {
        SystemModel m = donor_acceptor(500.0, 25.0, 10.0);
        OracleMode mode{300.0, Eigen::Vector2d(0.0, 0.0), 6};
        const DenseModel dense = build_hamiltonian(m, {mode}, u);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense.hamiltonian,
                                                           Eigen::EigenvaluesOnly);
        // Isolated two-level eigenvalues.
        const double mean = 0.5 * (500.0 + 25.0);
        const double split = 0.5 * std::sqrt((500.0 - 25.0) * (500.0 - 25.0) + 4.0 * 100.0);
        std::vector<double> expect;
        for (int q = 0; q < 6; ++q) {
            expect.push_back(mean - split + 300.0 * (q + 0.5));
            expect.push_back(mean + split + 300.0 * (q + 0.5));
        }
        std::sort(expect.begin(), expect.end());
        for (int i = 0; i < 12; ++i)
            CHECK(es.eigenvalues()[i] == doctest::Approx(expect[i]).epsilon(1e-12));
    }
    // Dimension guard.
    {
        SystemModel m = donor_acceptor(100.0, 0.0, 5.0);
        OracleMode big{100.0, Eigen::Vector2d(0.0, 0.1), 20000};
        CHECK_THROWS_AS(build_hamiltonian(m, {big}, u), ValidationError);
    }
}

TEST_CASE("thermal Fock weights and dimension helper") {
    UnitSystem u;
    // Ground state at T = 0.
    const auto w0 = thermal_fock_weights(500.0, 0.0, 5, u);
    CHECK(w0[0] == 1.0);
    CHECK(w0.sum() == doctest::Approx(1.0));
    // Boltzmann ratios at 300 K.
    const auto wT = thermal_fock_weights(500.0, 300.0, 12, u);
    const double z = std::exp(-500.0 / (u.kB * 300.0));
    CHECK(wT[1] / wT[0] == doctest::Approx(z).epsilon(1e-12));
    CHECK(wT.sum() == doctest::Approx(1.0).epsilon(1e-14));
    // The suggested dimension covers all but < 1e-10 of the weight.
    const int d = thermal_fock_dim(500.0, 300.0, u);
    CHECK(std::pow(z, d) < 1e-10);
    CHECK(std::pow(z, d - 1) >= 1e-10);
    CHECK(thermal_fock_dim(500.0, 0.0, u) == 1);
}

TEST_CASE("propagate: initial values, conservation laws, frozen dynamics at delta = 0") {
    UnitSystem u;
    Fig4 s = fig4_setup(0.0, 12);
    const DenseModel dense = build_hamiltonian(s.model, {s.mode}, u);
    std::vector<double> times{0.0, 60.0, 140.0, 250.0};
    const OracleResult res = propagate(dense, s.rho0, 300.0, times, {true, false});

    CHECK((res.system_rdm[0] - s.rho0).cwiseAbs().maxCoeff() < 1e-12);
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
        CHECK(res.global_trace[ti] == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(res.hermiticity_defect[ti] < 1e-10);
        // No coupling pathway: the donor population stays exactly 1.
        CHECK(res.system_rdm[ti](0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));
        // Energy conservation.
        CHECK(res.energy[ti] == doctest::Approx(res.energy[0]).epsilon(1e-9));
    }
}

TEST_CASE("propagate: unitarity and energy conservation with coupling") {
    UnitSystem u;
    Fig4 s = fig4_setup(50.0, 16);
    const DenseModel dense = build_hamiltonian(s.model, {s.mode}, u);
    std::vector<double> times{0.0, 100.0, 300.0, 700.0};
    const OracleResult res = propagate(dense, s.rho0, 300.0, times, {false, false});
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
        CHECK(res.global_trace[ti] == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(res.hermiticity_defect[ti] < 1e-10);
        CHECK(res.energy[ti] == doctest::Approx(res.energy[0]).epsilon(1e-9));
    }
}

TEST_CASE("Fock truncation convergence of the donor population") {
    // Fig.-4 parameters, delta = 10: dimensions 15 and 30 agree to 1e-6.
    UnitSystem u;
    Fig4 a = fig4_setup(10.0, 15);
    Fig4 b = fig4_setup(10.0, 30);
    const DenseModel da = build_hamiltonian(a.model, {a.mode}, u);
    const DenseModel db = build_hamiltonian(b.model, {b.mode}, u);
    std::vector<double> times;
    for (double t = 0.0; t <= 250.0; t += 10.0) times.push_back(t);
    const OracleResult ra = propagate(da, a.rho0, 300.0, times, {false, false});
    const OracleResult rb = propagate(db, b.rho0, 300.0, times, {false, false});
    for (std::size_t ti = 0; ti < times.size(); ++ti)
        CHECK(std::abs(ra.system_rdm[ti](0, 0).real() - rb.system_rdm[ti](0, 0).real()) < 1e-6);
}

TEST_CASE("bipartite entropy symmetry for a pure global state") {
    UnitSystem u;
    // Two modes, T = 0, pure system start: S(system) = S(environment).
    SystemModel m = donor_acceptor(200.0, 10.0, 25.0);
    m.channel_coefficients = Eigen::MatrixXd(2, 1);
    m.channel_coefficients << 1.0, -1.0;
    UnitSystem units;
    const double d1 = std::sqrt(2.0 * 15.0) / units.omega(180.0);
    const double d2 = std::sqrt(2.0 * 8.0) / units.omega(360.0);
    OracleMode mode1{180.0, Eigen::Vector2d(d1, -d1), 8};
    OracleMode mode2{360.0, Eigen::Vector2d(d2, -d2), 6};
    const DenseModel dense = build_hamiltonian(m, {mode1, mode2}, u);

    Eigen::MatrixXcd rho0(2, 2);
    rho0 << 0.5, 0.5, 0.5, 0.5;
    std::vector<double> times{40.0, 120.0, 260.0};
    OracleOptions opt;
    opt.mode_rdms = false;
    opt.environment_rdm = true;
    const OracleResult res = propagate(dense, rho0, 0.0, times, opt);
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
        const double s_sys = von_neumann_entropy(res.system_rdm[ti]);
        const double s_env = von_neumann_entropy(res.environment_rdm[ti]);
        CHECK(std::abs(s_sys - s_env) < 1e-8);
        CHECK(s_sys > 1e-3);  // entanglement actually formed
    }
}

TEST_CASE("oracle rejects invalid inputs") {
    UnitSystem u;
    Fig4 s = fig4_setup(10.0, 10);
    const DenseModel dense = build_hamiltonian(s.model, {s.mode}, u);
    Eigen::MatrixXcd bad(2, 2);
    bad << 0.7, 0.0, 0.0, 0.7;  // trace 1.4
    std::vector<double> times{0.0};
    CHECK_THROWS_AS(propagate(dense, bad, 300.0, times, {}), ValidationError);

    OracleMode badmode{-5.0, Eigen::Vector2d(0.0, 0.1), 4};
    CHECK_THROWS_AS(build_hamiltonian(s.model, {badmode}, u), ValidationError);
}
