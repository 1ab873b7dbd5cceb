#include <doctest.h>

#include <random>

#include <nlohmann/json.hpp>

#include "lcoguard/core_model.hpp"

using namespace lcoguard;

namespace {

DimensionlessSystem sample_system(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    DimensionlessSystem s;
    s.eps = 0.01 + 0.2 * u(rng);
    s.mu1 = 0.2 * u(rng);
    s.mu2 = 0.3 * u(rng);
    s.gamma = 0.5 + u(rng);
    s.alpha3 = 2.0 * u(rng) - 1.0;
    s.beta2 = 0.1 * u(rng);
    s.beta3 = 0.1 * u(rng);
    s.beta5 = 0.05 * u(rng);
    return s;
}

StateVector sample_state(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    StateVector x(u(rng), u(rng), u(rng), u(rng));
    return x;
}

// Physical-units accelerations, converted to the scaled time afterwards.
StateVector physical_rhs(const PhysicalSystem& p, const StateVector& x_tau) {
    const double wn1 = std::sqrt(p.k1 / p.m1);
    const double q1 = x_tau[0], v1 = x_tau[1] * wn1, qd = x_tau[2], vd = x_tau[3] * wn1;
    const double force = p.c2 * vd + p.k2 * qd + p.knl2_2 * qd * qd + p.knl2_3 * qd * qd * qd +
                         p.knl2_5 * std::pow(qd, 5);
    const double a1 = (p.c1 * (1.0 - q1 * q1) * v1 - p.k1 * q1 - p.knl1 * q1 * q1 * q1 - force) / p.m1;
    const double a2 = force / p.m2;
    return {x_tau[1], a1 / (wn1 * wn1), x_tau[3], (a1 - a2) / (wn1 * wn1)};
}

}  // namespace

TEST_CASE("linear matrix layout for the undamped coupled pair") {
    DimensionlessSystem s;
    s.eps = 0.05;
    s.mu2 = 0.0;
    s.gamma = 1.0;
    const Matrix4 W = linear_matrix(s);
    CHECK(W(1, 0) == -1.0);
    CHECK(W(1, 1) == 0.0);
    CHECK(W(1, 2) == doctest::Approx(-0.05).epsilon(1e-15));
    CHECK(W(1, 3) == 0.0);
    CHECK(W(3, 0) == -1.0);
    CHECK(W(3, 2) == doctest::Approx(-1.05).epsilon(1e-15));
    CHECK(W(3, 3) == 0.0);
    const Eigen::EigenSolver<Matrix4> es(W);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(es.eigenvalues()[i].real()) < 1e-12);
}

TEST_CASE("det W equals gamma squared") {
    std::mt19937 rng(7);
    for (int i = 0; i < 200; ++i) {
        const auto s = sample_system(rng);
        CHECK(linear_matrix(s).determinant() == doctest::Approx(s.gamma * s.gamma).epsilon(1e-10));
    }
}

TEST_CASE("rhs agrees with the physical equations of motion") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    for (int i = 0; i < 100; ++i) {
        PhysicalSystem p;
        p.m1 = u(rng);
        p.k1 = u(rng);
        p.c1 = 0.1 * u(rng);
        p.knl1 = 0.3 * u(rng);
        p.m2 = 0.05 * p.m1 * u(rng);
        p.k2 = p.m2 * p.k1 / p.m1 * u(rng);
        p.c2 = 0.02 * u(rng);
        p.knl2_2 = 0.01 * u(rng);
        p.knl2_3 = 0.01 * u(rng);
        p.knl2_5 = 0.01 * u(rng);
        const auto sys = nondimensionalize(p);
        const auto x = sample_state(rng);
        const StateVector want = physical_rhs(p, x);
        const StateVector got = rhs(sys, x);
        CHECK((got - want).norm() < 1e-12 * (1.0 + want.norm()));
    }
}

TEST_CASE("nondimensionalize and redimensionalize are inverse") {
    PhysicalSystem p;
    p.m1 = 2.0;
    p.k1 = 3.0;
    p.c1 = 0.1;
    p.knl1 = 0.4;
    p.m2 = 0.1;
    p.k2 = 0.14;
    p.c2 = 0.01;
    p.knl2_3 = 0.02;
    const auto s = nondimensionalize(p);
    const auto back = redimensionalize(s, 2.0, 3.0);
    CHECK(back.m2 == doctest::Approx(p.m2));
    CHECK(back.k2 == doctest::Approx(p.k2));
    CHECK(back.c2 == doctest::Approx(p.c2));
    CHECK(back.c1 == doctest::Approx(p.c1));
    CHECK(back.knl1 == doctest::Approx(p.knl1));
    CHECK(back.knl2_3 == doctest::Approx(p.knl2_3));
}

TEST_CASE("jacobian matches central differences") {
    std::mt19937 rng(3);
    const double h = 1e-6;
    for (int i = 0; i < 20; ++i) {
        const auto s = sample_system(rng);
        const StateVector x = 2.0 * sample_state(rng) / std::sqrt(4.0);
        const Matrix4 J = jacobian(s, x);
        Matrix4 fd;
        for (int k = 0; k < 4; ++k) {
            StateVector e = StateVector::Zero();
            e[k] = h;
            fd.col(k) = (rhs(s, x + e) - rhs(s, x - e)) / (2.0 * h);
        }
        CHECK((J - fd).norm() <= 1e-6 * std::max(1.0, J.norm()));
    }
}

TEST_CASE("jacobian at the origin is W, and the cubic primary term enters row 2") {
    std::mt19937 rng(5);
    const auto s = sample_system(rng);
    CHECK((jacobian(s, StateVector::Zero()) - linear_matrix(s)).norm() == 0.0);
    auto t = s;
    t.mu1 = 0.0;
    const Matrix4 J = jacobian(t, StateVector(1.0, 0.0, 0.0, 0.0));
    CHECK(J(1, 0) == doctest::Approx(-1.0 - 3.0 * t.alpha3));
}

TEST_CASE("origin is an equilibrium and the linear system is linear") {
    std::mt19937 rng(9);
    for (int i = 0; i < 50; ++i) {
        auto s = sample_system(rng);
        CHECK(rhs(s, StateVector::Zero()).norm() == 0.0);
        s.mu1 = 0.0;
        s.alpha3 = s.beta2 = s.beta3 = s.beta5 = 0.0;
        const auto x = sample_state(rng), y = sample_state(rng);
        const StateVector lhs = rhs(s, 0.3 * x - 1.7 * y);
        const StateVector rhs_sum = 0.3 * rhs(s, x) - 1.7 * rhs(s, y);
        CHECK((lhs - rhs_sum).norm() < 1e-14);
        const StateVector f = rhs(s, x);
        CHECK(f[3] - f[1] ==
              doctest::Approx(-s.gamma * s.gamma * x[2] - 2.0 * s.mu2 * s.gamma * x[3]).epsilon(1e-12));
    }
}

TEST_CASE("json round trip and validation") {
    DimensionlessSystem s;
    s.eps = 0.05;
    s.mu1 = 0.1;
    s.mu2 = 0.12;
    s.gamma = 0.97;
    s.alpha3 = 0.3;
    s.beta3 = 0.0136;
    nlohmann::json j = s;
    CHECK(j.get<DimensionlessSystem>() == s);

    const auto minimal = nlohmann::json{{"eps", 0.05}}.get<DimensionlessSystem>();
    CHECK(minimal.mu2 == doctest::Approx(0.5 * std::sqrt(0.05 / 1.05)));
    CHECK(minimal.gamma == doctest::Approx(1.0 / std::sqrt(1.05)));
    CHECK(minimal.alpha3 == 0.0);

    try {
        (void)nlohmann::json{{"eps", -1.0}}.get<DimensionlessSystem>();
        FAIL("negative eps accepted");
    } catch (const DomainError& e) {
        CHECK(e.field() == "eps");
    }
    CHECK_THROWS_AS((void)nlohmann::json({{"eps", 0.05}, {"zeta", 1.0}}).get<DimensionlessSystem>(), DomainError);
}
