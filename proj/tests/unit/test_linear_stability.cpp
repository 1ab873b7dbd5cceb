#include <doctest.h>

#include <algorithm>
#include <random>

#include "lcoguard/linear_stability.hpp"

using namespace lcoguard;

namespace {

DimensionlessSystem linear_system(double eps, double mu1, double mu2, double gamma) {
    DimensionlessSystem s;
    s.eps = eps;
    s.mu1 = mu1;
    s.mu2 = mu2;
    s.gamma = gamma;
    return s;
}

double max_real(const DimensionlessSystem& s) {
    const Eigen::EigenSolver<Matrix4> es(linear_matrix(s));
    double m = -1e300;
    for (int i = 0; i < 4; ++i) m = std::max(m, es.eigenvalues()[i].real());
    return m;
}

// Sorted real parts of the spectrum.
std::array<double, 4> real_parts(const DimensionlessSystem& s) {
    const Eigen::EigenSolver<Matrix4> es(linear_matrix(s));
    std::array<double, 4> r{};
    for (int i = 0; i < 4; ++i) r[i] = es.eigenvalues()[i].real();
    std::sort(r.begin(), r.end());
    return r;
}

}  // namespace

TEST_CASE("characteristic polynomial has the spectrum of W as roots") {
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const auto s = linear_system(0.01 + 0.2 * u(rng), 0.2 * u(rng), 0.3 * u(rng), 0.5 + u(rng));
        const auto p = char_poly(s);
        CHECK(p.a4 == 1.0);
        const Eigen::EigenSolver<Matrix4> es(linear_matrix(s));
        // Expand prod (z - lambda_i).
        std::array<std::complex<double>, 5> c{1.0, 0.0, 0.0, 0.0, 0.0};
        for (int k = 0; k < 4; ++k) {
            const auto lam = es.eigenvalues()[k];
            for (int j = k + 1; j >= 1; --j) c[j] -= lam * c[j - 1];
        }
        CHECK(c[1].real() == doctest::Approx(p.a3).epsilon(1e-9).scale(1.0));
        CHECK(c[2].real() == doctest::Approx(p.a2).epsilon(1e-9).scale(1.0));
        CHECK(c[3].real() == doctest::Approx(p.a1).epsilon(1e-9).scale(1.0));
        CHECK(c[4].real() == doctest::Approx(p.a0).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("Routh-Hurwitz verdict matches the eigenvalue test") {
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int compared = 0;
    for (int i = 0; i < 2000; ++i) {
        const auto s = linear_system(0.01 + 0.2 * u(rng), 0.2 * u(rng), 0.3 * u(rng), 0.5 + u(rng));
        const double m = max_real(s);
        if (std::abs(m) < 1e-6) continue;
        ++compared;
        const auto rep = routh_hurwitz(s);
        CHECK(rep.stable == (m < 0.0));
        CHECK(rep.stable == rep.condition_flags.all());
        CHECK(rep.unstable_pairs >= 0);
        CHECK(rep.unstable_pairs <= 2);
    }
    CHECK(compared > 1900);
}

TEST_CASE("optimal tuning closed forms") {
    for (double eps : {0.01, 0.05, 0.1}) {
        const auto t = optimal_tuning(eps);
        CHECK(t.gamma_opt == doctest::Approx(1.0 / std::sqrt(1.0 + eps)).epsilon(1e-15));
        CHECK(t.mu2_opt == doctest::Approx(std::sqrt(eps / (1.0 + eps)) / 2.0).epsilon(1e-15));
        CHECK(t.mu1_max == doctest::Approx(std::sqrt(eps) / 2.0).epsilon(1e-15));
    }
    CHECK_THROWS_AS(optimal_tuning(0.0), DomainError);
}

TEST_CASE("critical mu1 is the eigenvalue crossing") {
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 30; ++i) {
        const double eps = 0.02 + 0.1 * u(rng), mu2 = 0.05 + 0.15 * u(rng), gamma = 0.85 + 0.25 * u(rng);
        const double m = critical_mu1(eps, mu2, gamma);
        REQUIRE(m > 0.0);
        CHECK(max_real(linear_system(eps, m * (1.0 - 1e-6), mu2, gamma)) < 0.0);
        CHECK(max_real(linear_system(eps, m * (1.0 + 1e-6), mu2, gamma)) > 0.0);
    }
}

TEST_CASE("boundary peaks at the optimal tuning") {
    for (double eps : {0.01, 0.05, 0.1}) {
        const auto t = optimal_tuning(eps);
        CHECK(std::abs(critical_mu1(eps, t.mu2_opt, t.gamma_opt) - std::sqrt(eps) / 2.0) < 1e-7);
        // Any nearby tuning does worse.
        CHECK(critical_mu1(eps, t.mu2_opt * 1.05, t.gamma_opt) < t.mu1_max);
        CHECK(critical_mu1(eps, t.mu2_opt, t.gamma_opt * 1.01) < t.mu1_max);
    }
}

TEST_CASE("points A and B zero e3 and the lower one is the boundary") {
    for (double mu2 : {0.07, 0.09, 0.12}) {
        const auto ab = points_ab(0.05, mu2);
        for (const auto& p : {ab.a, ab.b}) CHECK(std::abs(routh_hurwitz(linear_system(0.05, p.mu1, mu2, p.gamma)).e3) < 1e-12);
        const double lower = std::min(ab.a.mu1, ab.b.mu1);
        CHECK(critical_mu1(0.05, mu2, ab.a.gamma) == doctest::Approx(lower).epsilon(1e-9));
        const auto r = real_parts(linear_system(0.05, lower, mu2, ab.a.gamma));
        CHECK(std::abs(r[3]) < 1e-8);
    }
    const auto t = optimal_tuning(0.05);
    const auto ab = points_ab(0.05, t.mu2_opt);
    CHECK(ab.a.mu1 == doctest::Approx(ab.b.mu1).epsilon(1e-12));
    CHECK(ab.a.mu1 == doctest::Approx(t.mu1_max).epsilon(1e-12));
}

TEST_CASE("double Hopf locus has both pairs marginal") {
    const auto locus = double_hopf_locus(0.05, Axis{0.03, 0.2, 18});
    REQUIRE(!locus.empty());
    const auto t = optimal_tuning(0.05);
    for (const auto& p : locus) {
        CHECK(p.mu2 <= t.mu2_opt + 1e-12);
        const auto r = real_parts(linear_system(0.05, p.mu1, p.mu2, p.gamma));
        CHECK(std::abs(r[3]) < 1e-6);
        CHECK(std::abs(r[2]) < 1e-6);
    }
}

TEST_CASE("stability chart ordering and verdicts") {
    const Axis mu1{0.0, 0.15, 7}, mu2{0.06, 0.16, 3}, gamma{0.9, 1.05, 5};
    const auto chart = stability_chart(0.05, mu1, mu2, gamma);
    REQUIRE(chart.nodes.size() == 7u * 3u * 5u);
    for (int i2 = 0; i2 < 3; ++i2)
        for (int ig = 0; ig < 5; ++ig)
            for (int i1 = 0; i1 < 7; ++i1) {
                const auto& n = chart.at(i1, i2, ig);
                CHECK(n.mu1 == mu1.at(i1));
                CHECK(n.mu2 == mu2.at(i2));
                CHECK(n.gamma == gamma.at(ig));
                const auto s = linear_system(0.05, n.mu1, n.mu2, n.gamma);
                const double m = max_real(s);
                if (std::abs(m) > 1e-9) CHECK(n.stable == (m < 0.0));
                CHECK(n.unstable_pairs == count_unstable_pairs(eigenvalues(s)));
            }
    CHECK_THROWS_AS(stability_chart(0.05, Axis{0.1, 0.0, 3}, mu2, gamma), DomainError);
}
