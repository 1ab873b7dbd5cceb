#include <doctest.h>

#include "lcoguard/integrator.hpp"
#include "lcoguard/lco_estimate.hpp"

using namespace lcoguard;

TEST_CASE("local estimate follows the square-root law") {
    const auto dec = delta_decomposition(0.05, 0.12, 0.985);
    const double d = dec.delta(0.3, 0.0136);
    REQUIRE(d < 0.0);
    const auto e1 = lco_amplitude_local(dec.hopf, d, dec.hopf.mu1_cr + 0.001);
    const auto e4 = lco_amplitude_local(dec.hopf, d, dec.hopf.mu1_cr + 0.004);
    CHECK(e1.valid);
    CHECK_FALSE(e1.unstable);
    CHECK(e4.q1_max == doctest::Approx(2.0 * e1.q1_max).epsilon(1e-12));
    CHECK(e1.r == doctest::Approx(std::sqrt(-dec.hopf.sigma_slope * 0.001 / d)).epsilon(1e-12));
    // s1 has unit x1 component, so the peak equals the radius.
    CHECK(e1.q1_max == doctest::Approx(e1.r).epsilon(1e-12));

    const auto below = lco_amplitude_local(dec.hopf, d, dec.hopf.mu1_cr - 0.001);
    CHECK_FALSE(below.valid);
    CHECK(lco_amplitude_local(dec.hopf, d, dec.hopf.mu1_cr + 0.06).warnings.size() == 1);
    CHECK_THROWS_AS(lco_amplitude_local(dec.hopf, 0.0, 0.1), NumericalError);
}

TEST_CASE("subcritical estimate lies below the Hopf point") {
    const auto dec = delta_decomposition(0.05, 0.12, 0.97);
    const double d = dec.delta(0.3, 0.0);
    REQUIRE(d > 0.0);
    const auto e = lco_amplitude_local(dec.hopf, d, dec.hopf.mu1_cr - 0.002);
    CHECK(e.valid);
    CHECK(e.unstable);
}

TEST_CASE("estimate matches the settled amplitude of a direct simulation") {
    auto dec = delta_decomposition(0.05, 0.12, 0.985);
    auto sys = dec.hopf.system;
    sys.alpha3 = 0.3;
    sys.beta3 = 0.0136;
    sys.mu1 = dec.hopf.mu1_cr + 0.003;
    const auto est = lco_amplitude_local(dec.hopf, dec.delta(0.3, 0.0136), sys.mu1);
    const auto tr = integrate(sys, StateVector(est.q1_max, 0.0, 0.0, 0.0), 4000.0, 1e-10, 0.05);
    double peak = 0.0;
    for (std::size_t i = 0; i < tr.t.size(); ++i)
        if (tr.t[i] > 3800.0) peak = std::max(peak, std::abs(tr.x[i][0]));
    CHECK(std::abs(peak - est.q1_max) / peak < 0.05);
}

TEST_CASE("iso-amplitude map") {
    const Axis mu2{0.08, 0.16, 5}, gamma{0.95, 1.0, 4};
    const auto cells = iso_amplitude_map(0.05, 0.3, 0.0136, 0.01, mu2, gamma);
    CHECK(cells.size() == 20);
    for (const auto& c : cells) {
        const auto e = lco_amplitude_local(0.05, c.mu2, c.gamma, 0.3, 0.0136, c.mu1_cr + 0.01);
        CHECK(c.valid == e.valid);
        if (c.valid) CHECK(c.q1_max == doctest::Approx(e.q1_max).epsilon(1e-12));
    }
    CHECK_THROWS_AS(iso_amplitude_map(0.05, 0.3, 0.0, 0.0, mu2, gamma), DomainError);
}
