#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ptwa/engine.hpp"
#include "ptwa/reference.hpp"

using namespace ptwa;

namespace {

/// Qubit with anti-correlated coupling to a two-mode discrete bath.
struct Setup {
    SystemModel model;
    BathSpec bath;
    InitialSystemDensity rho0;
};

Setup discrete_setup(double eps, double delta, double T = 0.0) {
    Setup s;
    s.model.energies = Eigen::Vector2d(0.5 * eps, -0.5 * eps);
    s.model.couplings = Eigen::MatrixXcd::Zero(2, 2);
    s.model.couplings(0, 1) = delta;
    s.model.couplings(1, 0) = delta;
    s.model.channel_coefficients = Eigen::MatrixXd(2, 1);
    s.model.channel_coefficients << 1.0, -1.0;
    s.bath.channels = {SpectralChannel{std::vector<DiscreteMode>{{180.0, 0.35}, {420.0, 0.15}}}};
    s.bath.temperature = T;
    s.bath.width_rule = T > 0.0 ? WidthRule::thermal : WidthRule::groundState;
    s.rho0.rho = Eigen::MatrixXcd(2, 2);
    s.rho0.rho << 0.5, 0.5, 0.5, 0.5;
    return s;
}

}  // namespace

TEST_CASE("order 0 reproduces the initial density and frozen populations") {
    Setup s = discrete_setup(80.0, 12.0);
    QuadratureSpec quad{200.0, 100, 2};
    SeriesEngine engine(s.model, s.bath, s.rho0, quad, BasisChoice::local);

    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            CHECK(std::abs(engine.rdm_order(0, 0, r, c) - s.rho0.rho(r, c)) < 1e-14);

    // Populations are constant at zeroth order.
    for (long ti : {10L, 50L, 100L}) {
        CHECK(std::abs(engine.rdm_order(0, ti, 0, 0) - s.rho0.rho(0, 0)) < 1e-13);
        CHECK(std::abs(engine.rdm_order(0, ti, 1, 1) - s.rho0.rho(1, 1)) < 1e-13);
    }
    // Orders >= 1 vanish at t = 0.
    CHECK(std::abs(engine.rdm_order(1, 0, 0, 1)) == 0.0);
    CHECK(std::abs(engine.rdm_order(2, 0, 0, 0)) == 0.0);
}

TEST_CASE("engine equals the serial reference path (local basis, orders 0..3)") {
    Setup s = discrete_setup(60.0, 15.0, 300.0);
    const double t_max = 150.0;
    const int grid = 30;
    QuadratureSpec quad{t_max, grid, 3};
    SeriesEngine engine(s.model, s.bath, s.rho0, quad, BasisChoice::local);
    ReferencePath ref(s.model, s.bath, s.rho0, t_max, grid);

    for (int N = 0; N <= 3; ++N)
        for (long it : {7L, 19L, 30L})
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) {
                    const cplx a = engine.rdm_order(N, it, r, c);
                    const cplx b = ref.local_rdm_order(N, it, r, c);
                    CHECK(std::abs(a - b) < 1e-11 * std::max(1.0, std::abs(b)));
                }
}

TEST_CASE("engine equals the serial reference path (eigenbasis, orders 0..2)") {
    Setup s = discrete_setup(60.0, 15.0, 300.0);
    const double t_max = 150.0;
    const int grid = 30;
    QuadratureSpec quad{t_max, grid, 2};
    SeriesEngine engine(s.model, s.bath, s.rho0, quad, BasisChoice::eigen);
    ReferencePath ref(s.model, s.bath, s.rho0, t_max, grid);

    for (int N = 0; N <= 2; ++N)
        for (long it : {5L, 18L, 30L})
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) {
                    const cplx a = engine.rdm_order(N, it, r, c);
                    const cplx b = ref.eigen_rdm_order(N, it, r, c);
                    CHECK(std::abs(a - b) < 1e-11 * std::max(1.0, std::abs(b)));
                }
}

TEST_CASE("assembled series: Hermiticity from pairing, trace preservation per order") {
    Setup s = discrete_setup(70.0, 10.0);
    QuadratureSpec quad{250.0, 120, 2};
    for (BasisChoice basis : {BasisChoice::local, BasisChoice::eigen}) {
        SeriesEngine engine(s.model, s.bath, s.rho0, quad, basis);
        const TimeSeriesResult series = engine.assemble_series();
        CHECK(series.hermiticity_defect() < 1e-10);
        for (int N = 1; N <= 2; ++N)
            for (std::size_t ti = 0; ti < series.times.size(); ti += 17)
                CHECK(std::abs(series.order_rdm[N][ti].trace()) < 1e-6);
    }
}

TEST_CASE("order-N contribution scales exactly as delta^N") {
    Setup s1 = discrete_setup(50.0, 4.0);
    Setup s2 = discrete_setup(50.0, 8.0);
    QuadratureSpec quad{120.0, 60, 3};
    SeriesEngine e1(s1.model, s1.bath, s1.rho0, quad, BasisChoice::local);
    SeriesEngine e2(s2.model, s2.bath, s2.rho0, quad, BasisChoice::local);
    for (int N = 1; N <= 3; ++N) {
        const cplx a = e1.rdm_order(N, 60, 0, 0);
        const cplx b = e2.rdm_order(N, 60, 0, 0);
        const double ratio = std::abs(b) / std::abs(a);
        CHECK(ratio == doctest::Approx(std::pow(2.0, N)).epsilon(1e-10));
    }
}

TEST_CASE("delta = 0: series terminates at order 0 with the dephasing envelope") {
    Setup s = discrete_setup(90.0, 0.0);
    QuadratureSpec quad{300.0, 150, 3};
    SeriesEngine engine(s.model, s.bath, s.rho0, quad, BasisChoice::local);

    BathKernels kernels(s.bath, 300.0);
    StateKernels sk(kernels, BasisCoefficients::local_basis(s.model, s.bath));
    LiouvillePathway coh;
    coh.pairs = {{0, 1}};

    for (long ti : {30L, 75L, 150L}) {
        for (int N = 1; N <= 3; ++N) CHECK(std::abs(engine.rdm_order(N, ti, 0, 1)) == 0.0);
        const double t = engine.dt() * ti;
        const double times[2] = {0.0, t};
        const double envelope = 0.5 * std::exp(sk.phi_tot(coh, times).real());
        CHECK(std::abs(engine.rdm_order(0, ti, 0, 1)) == doctest::Approx(envelope).epsilon(1e-12));
    }
}

TEST_CASE("order_contribution_envfree: Bloch components at t = 0") {
    Setup s = discrete_setup(50.0, 10.0);
    QuadratureSpec quad{100.0, 50, 2};
    SeriesEngine engine(s.model, s.bath, s.rho0, quad, BasisChoice::local);

    Eigen::MatrixXcd sx(2, 2), sz(2, 2);
    sx << 0, 1, 1, 0;
    sz << 1, 0, 0, -1;
    CHECK(engine.order_contribution_envfree(sx, 0, 0.0).real() == doctest::Approx(1.0));
    // Equal initial populations: <sigma_z> vanishes at order zero for all t.
    for (double t : {0.0, 50.0, 100.0})
        CHECK(std::abs(engine.order_contribution_envfree(sz, 0, t)) < 1e-14);
}

TEST_CASE("purity and Bloch helpers") {
    Eigen::MatrixXcd pure(2, 2), mixed(2, 2);
    pure << 0.5, 0.5, 0.5, 0.5;
    mixed << 0.5, 0.0, 0.0, 0.5;
    CHECK(purity(pure) == doctest::Approx(1.0));
    CHECK(purity(mixed) == doctest::Approx(0.5));
    const auto b = bloch_vector(pure);
    CHECK(b[0] == doctest::Approx(1.0));
    CHECK(b[1] == doctest::Approx(0.0));
    CHECK(b[2] == doctest::Approx(0.0));
    // Purity from the Bloch identity (1 + |a|^2)/2.
    CHECK(purity(pure) == doctest::Approx(0.5 * (1.0 + b[0] * b[0] + b[1] * b[1] + b[2] * b[2])));
}

TEST_CASE("validation: grids, caps, off-grid times") {
    Setup s = discrete_setup(50.0, 10.0);
    CHECK_THROWS_AS(SeriesEngine(s.model, s.bath, s.rho0, QuadratureSpec{100.0, 1, 2},
                                 BasisChoice::local),
                    ValidationError);
    CHECK_THROWS_AS(SeriesEngine(s.model, s.bath, s.rho0, QuadratureSpec{100.0, 50, 4},
                                 BasisChoice::local),
                    ValidationError);
    CHECK_THROWS_AS(SeriesEngine(s.model, s.bath, s.rho0, QuadratureSpec{100.0, 50, 3},
                                 BasisChoice::eigen),
                    ValidationError);

    QuadratureSpec quad{100.0, 50, 2};
    SeriesEngine engine(s.model, s.bath, s.rho0, quad, BasisChoice::local);
    CHECK_THROWS_AS(engine.time_index(3.1415), ValidationError);
    CHECK_THROWS_AS(engine.time_index(150.0), ValidationError);
    CHECK(engine.time_index(100.0) == 50);
    CHECK_THROWS_AS(engine.rdm_order(2, 5, 2, 0), ValidationError);
    CHECK_THROWS_AS(engine.eigen_rdm_order(1, 10.0, 0, 0), ValidationError);
}

TEST_CASE("parallel and serial assembly agree bitwise") {
    Setup s = discrete_setup(65.0, 9.0, 300.0);
    QuadratureSpec quad{150.0, 75, 2};
    SeriesEngine par(s.model, s.bath, s.rho0, quad, BasisChoice::local, true);
    SeriesEngine ser(s.model, s.bath, s.rho0, quad, BasisChoice::local, false);
    const auto a = par.assemble_series();
    const auto b = ser.assemble_series();
    for (int N = 0; N <= 2; ++N)
        for (std::size_t ti = 0; ti < a.times.size(); ti += 11)
            CHECK((a.order_rdm[N][ti] - b.order_rdm[N][ti]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("simplex quadrature converges when the grid doubles") {
    Setup s = discrete_setup(100.0, 10.0, 300.0);
    const double t_max = 400.0;
    SeriesEngine coarse(s.model, s.bath, s.rho0, QuadratureSpec{t_max, 200, 2}, BasisChoice::local);
    SeriesEngine fine(s.model, s.bath, s.rho0, QuadratureSpec{t_max, 400, 2}, BasisChoice::local);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            const cplx a = coarse.rdm_order(2, 200, r, c);
            const cplx b = fine.rdm_order(2, 400, r, c);
            CHECK(std::abs(a - b) < 1e-4);
        }
}

TEST_CASE("simplex quadrature convergence at the weak-coupling parameters") {
    // Donor-acceptor pair, each state on its own weak Drude-Lorentz channel:
    // doubling the default grid moves order-2 elements by < 1e-4 at t = 2 ps.
    SystemModel model;
    model.energies = Eigen::Vector2d(100.0, 0.0);
    model.couplings = Eigen::MatrixXcd::Zero(2, 2);
    model.couplings(0, 1) = 10.0;
    model.couplings(1, 0) = 10.0;
    model.channel_coefficients = Eigen::MatrixXd(2, 2);
    model.channel_coefficients << 1.0, 0.0, 0.0, 1.0;
    BathSpec bath;
    bath.channels = {SpectralChannel{DrudeLorentz{1.0, 53.08}},
                     SpectralChannel{DrudeLorentz{1.0, 53.08}}};
    bath.temperature = 300.0;
    bath.width_rule = WidthRule::thermal;
    InitialSystemDensity rho0;
    rho0.rho = Eigen::MatrixXcd(2, 2);
    rho0.rho << 0.5, 0.5, 0.5, 0.5;

    const double t_max = 2000.0;
    SeriesEngine coarse(model, bath, rho0, QuadratureSpec{t_max, 400, 2}, BasisChoice::local);
    SeriesEngine fine(model, bath, rho0, QuadratureSpec{t_max, 800, 2}, BasisChoice::local);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            CHECK(std::abs(coarse.rdm_order(2, 400, r, c) - fine.rdm_order(2, 800, r, c)) < 1e-4);
}
