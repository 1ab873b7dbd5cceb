#include "lcoguard/linear_stability.hpp"

#include <algorithm>
#include <cmath>

#include "lcoguard/parallel.hpp"

namespace lcoguard {

CharPoly char_poly(const DimensionlessSystem& sys) {
    // With k = gamma^2 and c = 2 mu2 gamma these are the usual closed forms;
    // writing them through (k, c) also covers the zero-stiffness absorber.
    const double e = sys.eps, m1 = sys.mu1;
    const double k = sys.absorber_stiffness();
    const double c = sys.absorber_damping();
    CharPoly p;
    p.a3 = (e + 1.0) * c - 2.0 * m1;
    p.a2 = (e + 1.0) * k - 2.0 * m1 * c + 1.0;
    p.a1 = c - 2.0 * m1 * k;
    p.a0 = k;
    return p;
}

std::array<std::complex<double>, 4> eigenvalues(const DimensionlessSystem& sys) {
    Eigen::EigenSolver<Matrix4> solver(linear_matrix(sys), false);
    std::array<std::complex<double>, 4> out{};
    for (int i = 0; i < 4; ++i) out[static_cast<std::size_t>(i)] = solver.eigenvalues()[i];
    std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) {
        if (l.real() != r.real()) return l.real() > r.real();
        return l.imag() > r.imag();
    });
    return out;
}

int count_unstable_pairs(const std::array<std::complex<double>, 4>& eig) {
    int count = 0;
    for (const auto& z : eig)
        if (z.imag() > kMarginalBand && z.real() > kMarginalBand) ++count;
    return count;
}

namespace {

// Hurwitz test alone, without the eigenvalue cross-check.
bool hurwitz_stable(const CharPoly& c) {
    if (!(c.a3 > 0.0 && c.a2 > 0.0 && c.a1 > 0.0 && c.a0 > 0.0)) return false;
    const double e2 = (c.a3 * c.a2 - c.a4 * c.a1) / c.a3;
    return e2 > 0.0 && e2 * c.a1 - c.a3 * c.a0 > 0.0;
}

}  // namespace

StabilityReport routh_hurwitz(const DimensionlessSystem& sys) {
    StabilityReport rep;
    rep.coeffs = char_poly(sys);
    const auto& c = rep.coeffs;
    rep.eigenvalues = eigenvalues(sys);
    rep.unstable_pairs = count_unstable_pairs(rep.eigenvalues);

    rep.condition_flags.a3 = c.a3 > 0.0;
    rep.condition_flags.a2 = c.a2 > 0.0;
    rep.condition_flags.a1 = c.a1 > 0.0;
    rep.condition_flags.a0 = c.a0 > 0.0;
    if (c.a3 == 0.0) {
        rep.degenerate = true;
        rep.marginal = true;
        rep.stable = false;
        return rep;
    }
    rep.e2 = (c.a3 * c.a2 - c.a4 * c.a1) / c.a3;
    rep.e3 = rep.e2 * c.a1 - c.a3 * c.a0;
    rep.condition_flags.e2 = rep.e2 > 0.0;
    rep.condition_flags.e3 = rep.e3 > 0.0;
    rep.stable = rep.condition_flags.all();
    for (double q : {c.a3, c.a2, c.a1, c.a0, rep.e2, rep.e3})
        if (std::abs(q) < kMarginalBand) rep.marginal = true;
    return rep;
}

double critical_mu1(double eps, double mu2, double gamma) {
    DimensionlessSystem sys;
    sys.eps = eps;
    sys.mu2 = mu2;
    sys.gamma = gamma;
    sys.validate();

    const auto stable_at = [&](double mu1) { return hurwitz_stable(char_poly(sys.with_mu1(mu1))); };
    if (!stable_at(0.0)) return 0.0;

    // a3 > 0 and a1 > 0 are necessary, so the boundary lies below both bounds.
    const double bound = std::min((1.0 + eps) * gamma * mu2, mu2 / gamma);
    constexpr int kScan = 256;
    double lo = 0.0;
    double hi = bound;
    for (int i = 1; i <= kScan; ++i) {
        const double mu1 = bound * i / kScan;
        if (!stable_at(mu1)) {
            hi = mu1;
            break;
        }
        lo = mu1;
    }
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (stable_at(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

PointsAB points_ab(double eps, double mu2) {
    if (!(eps > 0.0)) throw DomainError("eps", "must be positive");
    if (!(mu2 > 0.0)) throw DomainError("mu2", "must be positive (point B is undefined at mu2 = 0)");
    const double root = std::sqrt(1.0 + eps);
    return {{mu2 * root, 1.0 / root}, {eps / (4.0 * mu2 * root), 1.0 / root}};
}

TuningResult optimal_tuning(double eps) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("eps", "must be positive");
    return {1.0 / std::sqrt(1.0 + eps), 0.5 * std::sqrt(eps / (1.0 + eps)), 0.5 * std::sqrt(eps)};
}

StabilityChart stability_chart(double eps, const Axis& mu1, const Axis& mu2, const Axis& gamma) {
    for (const auto* axis : {&mu1, &mu2, &gamma})
        if (axis->count < 1 || (axis->count > 1 && !(axis->max > axis->min)))
            throw DomainError("grid", "axes need count >= 1 and increasing bounds");

    StabilityChart chart{mu1, mu2, gamma, {}};
    const auto n1 = static_cast<std::size_t>(mu1.count);
    const auto ng = static_cast<std::size_t>(gamma.count);
    const auto total = n1 * ng * static_cast<std::size_t>(mu2.count);
    chart.nodes.resize(total);
    parallel_for(total, [&](std::size_t idx) {
        const int i1 = static_cast<int>(idx % n1);
        const int ig = static_cast<int>((idx / n1) % ng);
        const int i2 = static_cast<int>(idx / (n1 * ng));
        DimensionlessSystem sys;
        sys.eps = eps;
        sys.mu1 = mu1.at(i1);
        sys.mu2 = mu2.at(i2);
        sys.gamma = gamma.at(ig);
        const auto rep = routh_hurwitz(sys);
        chart.nodes[idx] = {sys.mu1, sys.mu2, sys.gamma, rep.stable, rep.unstable_pairs, false};
    });
    for (int i2 = 0; i2 < mu2.count; ++i2)
        for (int ig = 0; ig < gamma.count; ++ig)
            for (int i1 = 0; i1 < mu1.count; ++i1) {
                auto& node = chart.at(i1, i2, ig);
                const auto differs = [&](int j1, int j2, int jg) {
                    if (j1 < 0 || j1 >= mu1.count || j2 < 0 || j2 >= mu2.count || jg < 0 || jg >= gamma.count)
                        return false;
                    return chart.at(j1, j2, jg).stable != node.stable;
                };
                node.boundary = differs(i1 - 1, i2, ig) || differs(i1 + 1, i2, ig) || differs(i1, i2 - 1, ig) ||
                                differs(i1, i2 + 1, ig) || differs(i1, i2, ig - 1) || differs(i1, i2, ig + 1);
            }
    return chart;
}

std::vector<DoubleHopfPoint> double_hopf_locus(double eps, const Axis& mu2_axis) {
    const auto tuning = optimal_tuning(eps);
    std::vector<DoubleHopfPoint> locus;
    for (int i = 0; i < mu2_axis.count; ++i) {
        const double mu2 = mu2_axis.at(i);
        if (!(mu2 > 0.0) || mu2 > tuning.mu2_opt * (1.0 + 1e-12)) continue;
        // a3 = 0 and a1 = 0 hold together only on gamma = 1/sqrt(1+eps), at point A.
        const auto ab = points_ab(eps, mu2);
        const double gamma = ab.a.gamma;
        const double boundary = critical_mu1(eps, mu2, gamma);
        if (std::abs(boundary - ab.a.mu1) > 1e-9) continue;

        DimensionlessSystem sys;
        sys.eps = eps;
        sys.mu1 = boundary;
        sys.mu2 = mu2;
        sys.gamma = gamma;
        const auto eig = eigenvalues(sys);
        int on_axis = 0;
        for (const auto& z : eig)
            if (z.imag() > 0.0 && std::abs(z.real()) < 1e-6) ++on_axis;
        if (on_axis == 2) locus.push_back({boundary, mu2, gamma});
    }
    return locus;
}

}  // namespace lcoguard
