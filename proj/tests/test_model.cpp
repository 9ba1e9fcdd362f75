#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "ptwa/gauss_legendre.hpp"
#include "ptwa/model.hpp"

using namespace ptwa;

namespace {

SystemModel two_level(double gap, double delta) {
    SystemModel m;
    m.energies = Eigen::Vector2d(gap, 0.0);
    m.couplings = Eigen::MatrixXcd::Zero(2, 2);
    m.couplings(0, 1) = delta;
    m.couplings(1, 0) = delta;
    m.channel_coefficients = Eigen::MatrixXd(2, 1);
    m.channel_coefficients << 1.0, -1.0;
    return m;
}

}  // namespace

TEST_CASE("unit system: phase convention and positivity") {
    UnitSystem u;
    CHECK(u.hbar > 0.0);
    CHECK(u.kB > 0.0);
    // Phase accrued by 1 cm^-1 over hbar fs is exactly one radian.
    CHECK(1.0 * u.hbar / u.hbar == doctest::Approx(1.0));
    // A 100 cm^-1 mode has angular frequency 100/hbar fs^-1.
    CHECK(u.omega(100.0) == doctest::Approx(100.0 / 5308.837));
}

TEST_CASE("diagonalize_system: analytic two-level splitting") {
    SystemModel m = two_level(100.0, 10.0);
    const auto em = diagonalize_system(m, Eigen::VectorXd::Zero(1));
    const double split = em.eigen_energies[1] - em.eigen_energies[0];
    CHECK(split == doctest::Approx(std::sqrt(100.0 * 100.0 + 4.0 * 10.0 * 10.0)).epsilon(1e-12));
    CHECK(split == doctest::Approx(101.980).epsilon(1e-4));
}

TEST_CASE("diagonalize_system: zero coupling gives identity rotation") {
    SystemModel m = two_level(100.0, 0.0);
    m.energies = Eigen::Vector2d(0.0, 100.0);  // already ascending
    const auto em = diagonalize_system(m, Eigen::VectorXd::Zero(1));
    CHECK((em.coefficients - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(em.eigen_energies[0] == 0.0);
    CHECK(em.eigen_energies[1] == 100.0);
}

TEST_CASE("diagonalize_system: symmetric two-level eigenvectors") {
    SystemModel m = two_level(0.0, 10.0);
    const auto em = diagonalize_system(m, Eigen::VectorXd::Zero(1));
    CHECK(em.eigen_energies[1] - em.eigen_energies[0] == doctest::Approx(20.0).epsilon(1e-12));
    const double inv = 1.0 / std::sqrt(2.0);
    for (int a = 0; a < 2; ++a)
        for (int n = 0; n < 2; ++n) CHECK(std::abs(em.coefficients(n, a)) == doctest::Approx(inv));
}

TEST_CASE("diagonalize_system: unitarity and displacement rotation on random systems") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int M = 2 + trial % 3;
        SystemModel m;
        m.energies = Eigen::VectorXd::NullaryExpr(M, [&] { return 100.0 * dist(rng); });
        m.couplings = Eigen::MatrixXcd::Zero(M, M);
        for (int i = 0; i < M; ++i)
            for (int j = i + 1; j < M; ++j) {
                const cplx v(10.0 * dist(rng), 10.0 * dist(rng));
                m.couplings(i, j) = v;
                m.couplings(j, i) = std::conj(v);
            }
        m.channel_coefficients = Eigen::MatrixXd::NullaryExpr(M, 2, [&] { return dist(rng); });
        const auto em = diagonalize_system(m, Eigen::VectorXd::Zero(2));

        const Eigen::MatrixXcd& C = em.coefficients;
        CHECK((C.adjoint() * C - Eigen::MatrixXcd::Identity(M, M)).cwiseAbs().maxCoeff() < 1e-12);

        // U^dagger h U diagonal with the eigenvalues.
        Eigen::MatrixXcd h = m.couplings;
        for (int n = 0; n < M; ++n) h(n, n) = m.energies[n];
        Eigen::MatrixXcd d = C.adjoint() * h * C;
        for (int a = 0; a < M; ++a) d(a, a) -= em.eigen_energies[a];
        CHECK(d.cwiseAbs().maxCoeff() < 1e-10);

        // Rotated displacements reproduce sum_n c_n^a c_n^b* g_n exactly.
        for (int c = 0; c < 2; ++c)
            for (int a = 0; a < M; ++a)
                for (int b = 0; b < M; ++b) {
                    cplx expect = 0.0;
                    for (int n = 0; n < M; ++n)
                        expect += C(n, a) * std::conj(C(n, b)) * m.channel_coefficients(n, c);
                    CHECK(std::abs(em.channel_projections[c](a, b) - expect) < 1e-14);
                }
    }
}

TEST_CASE("diagonalize_system rejects non-Hermitian couplings") {
    SystemModel m = two_level(10.0, 1.0);
    m.couplings(0, 1) = cplx(1.0, 2.0);
    m.couplings(1, 0) = cplx(1.0, 2.0);  // not the conjugate
    CHECK_THROWS_AS(diagonalize_system(m, Eigen::VectorXd::Zero(1)), ValidationError);
}

TEST_CASE("suppression cutoffs: published values and round trip") {
    const auto [nu_h, nu_l] = suppression_cutoffs(50.0, 100.0, 2.0 / 3.0);
    CHECK(nu_h == doctest::Approx(173.205).epsilon(1e-5));
    CHECK(nu_l == doctest::Approx(57.735).epsilon(1e-5));

    // alpha = 1/2 degenerates to omega_c on both sides.
    const auto [h2, l2] = suppression_cutoffs(50.0, 100.0, 0.5);
    CHECK(h2 == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(l2 == doctest::Approx(100.0).epsilon(1e-12));

    // Round trip of the defining relations, many alphas.
    for (double alpha = 0.05; alpha < 1.0; alpha += 0.05) {
        const auto [nh, nl] = suppression_cutoffs(50.0, 100.0, alpha);
        CHECK(2.0 / std::numbers::pi * std::atan(nh / 100.0) == doctest::Approx(alpha).epsilon(1e-12));
        CHECK(1.0 - 2.0 / std::numbers::pi * std::atan(nl / 100.0) ==
              doctest::Approx(alpha).epsilon(1e-12));
    }
    CHECK_THROWS_AS(suppression_cutoffs(50.0, 100.0, 0.0), ValidationError);
    CHECK_THROWS_AS(suppression_cutoffs(50.0, 100.0, 1.0), ValidationError);
}

TEST_CASE("discretize_channel: reorganization against trapezoid integral") {
    const DrudeLorentz dl{50.0, 100.0};
    const SpectralChannel ch{dl};
    const auto disc = discretize_channel(ch, 300, 1000.0);
    UnitSystem u;
    double sum = 0.0;
    for (const auto& m : disc.modes()) sum += m.reorganization(u);

    // Independent trapezoid integral of J/(pi w) over (0, 1000].
    const int n = 20000;
    const double dw = 1000.0 / n;
    double integral = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double w = i * dw;
        const double f = w == 0.0 ? 2.0 * dl.lambda / (std::numbers::pi * dl.omega_c)
                                  : dl.value(w) / (std::numbers::pi * w);
        integral += f * dw * ((i == 0 || i == n) ? 0.5 : 1.0);
    }
    CHECK(std::abs(sum - integral) / integral < 0.02);
}

TEST_CASE("discretize_channel: window keeps the suppressed reorganization") {
    // Low-frequency suppression window [57.735, inf): lambda-tilde = 33.33.
    SpectralChannel ch{DrudeLorentz{50.0, 100.0, 57.735, std::numeric_limits<double>::infinity()}};
    UnitSystem u;
    // Use a wide omega_max so the truncated tail is small.
    const auto disc = discretize_channel(ch, 2000, 40.0 * 100.0);
    double sum = 0.0;
    for (const auto& m : disc.modes()) sum += m.reorganization(u);
    CHECK(sum == doctest::Approx(windowed_reorganization(DrudeLorentz{50.0, 100.0}, 57.735,
                                                         40.0 * 100.0))
                     .epsilon(1e-9));
    // The analytic full-window value is the published 33.33 cm^-1.
    CHECK(windowed_reorganization(DrudeLorentz{50.0, 100.0}, 57.735,
                                  std::numeric_limits<double>::infinity()) ==
          doctest::Approx(33.333).epsilon(1e-3));
}

TEST_CASE("discretize_channel: K = 1 carries the full windowed reorganization") {
    SpectralChannel ch{DrudeLorentz{50.0, 100.0}};
    const auto disc = discretize_channel(ch, 1, 1000.0);
    REQUIRE(disc.modes().size() == 1);
    UnitSystem u;
    CHECK(disc.modes()[0].reorganization(u) ==
          doctest::Approx(windowed_reorganization(DrudeLorentz{50.0, 100.0}, 0.0, 1000.0))
              .epsilon(1e-12));
    CHECK(disc.modes()[0].wavenumber == doctest::Approx(500.0));
}

TEST_CASE("discretize_channel rejects bad arguments") {
    SpectralChannel ch{DrudeLorentz{50.0, 100.0}};
    CHECK_THROWS_AS(discretize_channel(ch, 0, 1000.0), ValidationError);
    CHECK_THROWS_AS(discretize_channel(ch, 10, -5.0), ValidationError);
}

TEST_CASE("bath widths: ground state and thermal rules") {
    UnitSystem u;
    BathSpec bath;
    bath.channels = {SpectralChannel{std::vector<DiscreteMode>{{100.0, 0.1}}}};
    bath.width_rule = WidthRule::groundState;
    const double w = u.omega(100.0);
    CHECK(bath.sigma_x(100.0) == doctest::Approx(std::sqrt(u.hbar / (2.0 * w))).epsilon(1e-14));
    CHECK(bath.sigma_p(100.0) == doctest::Approx(w * bath.sigma_x(100.0)).epsilon(1e-14));
    CHECK(bath.sigma_xp(100.0) == doctest::Approx(0.5 * u.hbar).epsilon(1e-14));

    bath.width_rule = WidthRule::thermal;
    bath.temperature = 300.0;
    const double bho = 100.0 / (u.kB * 300.0);
    CHECK(bath.sigma_x(100.0) ==
          doctest::Approx(std::sqrt(u.hbar / (2.0 * w * std::tanh(0.5 * bho)))).epsilon(1e-14));
    CHECK(bath.sigma_p(100.0) == doctest::Approx(w * bath.sigma_x(100.0)).epsilon(1e-14));
}

TEST_CASE("initial density validation") {
    InitialSystemDensity rho;
    rho.rho = Eigen::MatrixXcd(2, 2);
    rho.rho << 0.5, 0.5, 0.5, 0.5;
    CHECK_NOTHROW(rho.validate());
    rho.rho(0, 1) = 0.9;  // breaks positivity and Hermiticity
    CHECK_THROWS(rho.validate());
    rho.rho << 0.7, 0.0, 0.0, 0.7;  // trace 1.4
    CHECK_THROWS_AS(rho.validate(), ValidationError);
}

TEST_CASE("discretization convergence: halving the spacing at least halves the error") {
    const DrudeLorentz dl{50.0, 100.0};
    const SpectralChannel ch{dl};
    UnitSystem u;
    const double target = windowed_reorganization(dl, 0.0, 1000.0);
    auto unscaled_error = [&](int K) {
        // Bypass the exact rescaling: measure the raw midpoint-rule error.
        const double dw = 1000.0 / K;
        double sum = 0.0;
        for (int k = 0; k < K; ++k) {
            const double w = (k + 0.5) * dw;
            sum += dl.value(w) * dw / (std::numbers::pi * w);
        }
        return std::abs(sum - target);
    };
    CHECK(unscaled_error(200) <= 0.5 * unscaled_error(100));
    CHECK(unscaled_error(400) <= 0.5 * unscaled_error(200));
}
