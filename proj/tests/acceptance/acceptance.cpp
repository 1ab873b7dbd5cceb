// Acceptance gate: one line per criterion, non-zero exit if any fails.

#include <chrono>
#include <deque>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lcoguard/cli.hpp"
#include "lcoguard/continuation.hpp"
#include "lcoguard/hopf_normal_form.hpp"
#include "lcoguard/io.hpp"
#include "lcoguard/lco_estimate.hpp"
#include "lcoguard/linear_stability.hpp"
#include "lcoguard/nes_benchmark.hpp"

using namespace lcoguard;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Verdict()> check;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

DimensionlessSystem design(double mu2, double gamma, double alpha3, double beta3) {
    DimensionlessSystem s;
    s.eps = 0.05;
    s.mu2 = mu2;
    s.gamma = gamma;
    s.alpha3 = alpha3;
    s.beta3 = beta3;
    return s;
}

// Branches reused by several criteria.
std::deque<LcoBranch> g_branches;

const LcoBranch& keep(const HopfBranch& hb) {
    g_branches.push_back(hb.branch);
    return g_branches.back();
}

Verdict tuning() {
    const auto t = optimal_tuning(0.05);
    const double g = 1.0 / std::sqrt(1.05), m = 0.5 * std::sqrt(0.05 / 1.05), u = 0.5 * std::sqrt(0.05);
    const double err = std::max({std::abs(t.gamma_opt - g), std::abs(t.mu2_opt - m), std::abs(t.mu1_max - u)});
    const bool digits = std::abs(t.gamma_opt - 0.975900) < 1e-6 && std::abs(t.mu2_opt - 0.109109) < 1e-6 &&
                        std::abs(t.mu1_max - 0.1118034) < 1e-7;
    return {err < 1e-12 && digits, fmt("max error %.2e", err)};
}

Verdict routh_vs_eigen() {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int disagreements = 0, banded = 0;
    for (int i = 0; i < 10000; ++i) {
        DimensionlessSystem s;
        s.eps = 0.005 + 0.2 * u(rng);
        s.mu1 = 0.25 * u(rng);
        s.mu2 = 0.3 * u(rng);
        s.gamma = 0.5 + u(rng);
        const auto rep = routh_hurwitz(s);
        double m = -1e300;
        for (const auto& e : rep.eigenvalues) m = std::max(m, e.real());
        if (std::abs(m) < 1e-6) {
            ++banded;
            continue;
        }
        if (rep.stable != (m < 0.0)) ++disagreements;
    }
    return {disagreements == 0,
            std::to_string(disagreements) + " disagreements, " + std::to_string(banded) + " draws in the margin band"};
}

Verdict boundary_peak() {
    double worst = 0.0;
    for (double eps : {0.01, 0.05, 0.1}) {
        const auto t = optimal_tuning(eps);
        worst = std::max(worst, std::abs(critical_mu1(eps, t.mu2_opt, t.gamma_opt) - std::sqrt(eps) / 2.0));
    }
    return {worst < 1e-7, fmt("max |mu1_cr - sqrt(eps)/2| = %.2e", worst)};
}

// Criticality coefficients of both pairs at point C by projection, x4 = 1.
std::pair<double, double> point_c_projection(double eps, double alpha3, double beta3) {
    const auto t = optimal_tuning(eps);
    auto s = design(t.mu2_opt, t.gamma_opt, alpha3, beta3);
    s.eps = eps;
    s.mu1 = t.mu1_max;
    std::vector<double> w;
    for (const auto& e : eigenvalues(s))
        if (e.imag() > 0.0) w.push_back(e.imag());
    std::sort(w.begin(), w.end(), std::greater<>());
    double d[2];
    for (int k = 0; k < 2; ++k) {
        auto h = hopf_point_at(s, w[k]);
        h = rescale_critical_eigenvector(h, 1.0 / h.s1[3]);
        d[k] = planar_reduction(s, h).delta();
    }
    return {d[0], d[1]};
}

Verdict double_hopf() {
    double worst = 0.0;
    for (double eps : {0.01, 0.05, 0.1}) {
        const double ratio = -eps / ((1.0 + eps) * (1.0 + eps));
        // Slopes of delta34 from the closed form and from the projection.
        const auto c0 = double_hopf_deltas(eps, 0.0, 0.0), ca = double_hopf_deltas(eps, 1.0, 0.0),
                   cb = double_hopf_deltas(eps, 0.0, 1.0);
        worst = std::max(worst, std::abs((ca.delta34 - c0.delta34) / (cb.delta34 - c0.delta34) - ratio));
        const auto p0 = point_c_projection(eps, 0.0, 0.0), pa = point_c_projection(eps, 1.0, 0.0),
                   pb = point_c_projection(eps, 0.0, 1.0);
        worst = std::max(worst, std::abs((pa.second - p0.second) / (pb.second - p0.second) - ratio));
        for (double a : {0.0, 0.3, 1.0}) {
            const double b = beta3_tuning(eps, a);
            const auto c = double_hopf_deltas(eps, a, b);
            const auto p = point_c_projection(eps, a, b);
            worst = std::max({worst, std::abs(c.delta34), std::abs(p.second), std::abs(c.delta12 - c0.delta12),
                              std::abs(p.first - p0.first)});
        }
    }
    return {worst < 1e-10, fmt("max deviation %.2e (closed form and projection)", worst)};
}

Verdict fig10_signs() {
    struct Case {
        double gamma, alpha3, beta3;
        Criticality want;
    };
    const Case cases[] = {{0.970, 0.0, 0.0, Criticality::supercritical},
                          {0.970, 0.3, 0.0, Criticality::subcritical},
                          {0.970, 0.3, 0.0136, Criticality::supercritical},
                          {0.985, 0.3, 0.0, Criticality::supercritical}};
    std::string detail;
    bool ok = true;
    for (const auto& c : cases) {
        const auto r = delta(0.05, 0.12, c.gamma, c.alpha3, c.beta3);
        ok = ok && r.criticality == c.want;
        detail += fmt("%.4g ", r.delta);
    }
    return {ok, "delta = " + detail};
}

Verdict estimate_vs_continuation() {
    const auto sys = design(0.12, 0.985, 0.3, 0.0136);
    const auto hb = branch_from_hopf(sys);
    const auto& br = keep(hb);
    const auto dec = delta_decomposition(0.05, 0.12, 0.985);
    const double d = dec.delta(0.3, 0.0136);
    double worst = 0.0;
    int compared = 0;
    for (double dm : {0.001, 0.002, 0.003, 0.004, 0.005}) {
        const double mu1 = dec.hopf.mu1_cr + dm;
        for (std::size_t i = 1; i < br.points.size(); ++i) {
            const auto &p = br.points[i - 1], &q = br.points[i];
            if ((p.mu1 - mu1) * (q.mu1 - mu1) > 0.0) continue;
            const double w = (mu1 - p.mu1) / (q.mu1 - p.mu1);
            const double amp = p.amplitude + w * (q.amplitude - p.amplitude);
            const auto est = lco_amplitude_local(dec.hopf, d, mu1);
            worst = std::max(worst, std::abs(est.q1_max - amp) / amp);
            ++compared;
            break;
        }
    }
    return {compared == 5 && worst < 0.05,
            fmt("max relative gap %.3f", worst) + " over " + std::to_string(compared) + " offsets"};
}

Verdict bistability() {
    const auto& ltva = keep(branch_from_hopf(design(0.12, 0.985, 0.3, 0.0)));
    const auto& nltva = keep(branch_from_hopf(design(0.12, 0.985, 0.3, 0.018)));
    const auto f0 = ltva.count(EventKind::fold), f1 = nltva.count(EventKind::fold);
    return {f0 >= 2 && f1 == 0, "folds: beta3=0 -> " + std::to_string(f0) + ", beta3=0.018 -> " + std::to_string(f1)};
}

Verdict secondary_hopf() {
    const auto& br = keep(branch_from_hopf(design(0.097, 0.985, 0.3, 0.0)));
    const auto ns = br.count(EventKind::neimark_sacker);
    return {ns >= 1, std::to_string(ns) + " Neimark-Sacker events (gamma = 0.985)"};
}

Verdict nes_comparison() {
    const auto b = nes_boundary(0.05, 0.0, 5.0, 50001);
    const bool boundary_ok = std::abs(b.global_max - 0.0125) < 1e-8 && std::abs(b.Lambda_at_max - 1.0) < 1e-8;
    const auto rep = compare_time_series(0.05, 0.025, 4.0 / 3.0);
    std::string detail = fmt("max %.10g; ", b.global_max);
    bool ok = boundary_ok;
    for (const auto& c : rep.cases) {
        const auto want = c.name == "nltva" ? lcoguard::Outcome::decays_to_zero : lcoguard::Outcome::settles_on_lco;
        ok = ok && c.outcome == want;
        detail += c.name + "=" + to_string(c.outcome) + " ";
    }
    return {ok, detail};
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

Verdict property_suite() {
    std::vector<std::string> failures;
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    // Sign of delta under rescaling of the critical eigenvector.
    const auto dec = delta_decomposition(0.05, 0.12, 0.97);
    for (int i = 0; i < 50; ++i) {
        auto s = dec.hopf.system;
        s.alpha3 = 2.0 * u(rng) - 1.0;
        s.beta3 = 0.05 * u(rng) - 0.025;
        const double base = planar_reduction(s, dec.hopf).delta();
        const auto c = std::polar(0.1 + 10.0 * u(rng), 6.283185307179586 * u(rng));
        const double scaled = planar_reduction(s, rescale_critical_eigenvector(dec.hopf, c)).delta();
        if ((base < 0.0) != (scaled < 0.0)) {
            failures.push_back("rescaling flipped the sign of delta");
            break;
        }
    }

    // Affinity: delta0 + delta_alpha a + delta_beta b against direct projection.
    double affine = 0.0;
    for (int i = 0; i < 50; ++i) {
        auto s = dec.hopf.system;
        s.alpha3 = 2.0 * u(rng) - 1.0;
        s.beta3 = 0.05 * u(rng) - 0.025;
        affine = std::max(affine, std::abs(planar_reduction(s, dec.hopf).delta() - dec.delta(s.alpha3, s.beta3)));
    }
    if (affine > 1e-10) failures.push_back(fmt("affinity residual %.2e", affine));

    // Jacobian against central differences.
    double jac = 0.0;
    for (int i = 0; i < 20; ++i) {
        auto s = design(0.3 * u(rng), 0.5 + u(rng), 2.0 * u(rng) - 1.0, 0.1 * u(rng));
        s.mu1 = 0.2 * u(rng);
        s.beta2 = 0.1 * u(rng);
        s.beta5 = 0.05 * u(rng);
        StateVector x(u(rng) - 0.5, u(rng) - 0.5, u(rng) - 0.5, u(rng) - 0.5);
        x *= 2.0;
        const Matrix4 J = jacobian(s, x);
        Matrix4 fd;
        for (int k = 0; k < 4; ++k) {
            StateVector e = StateVector::Zero();
            e[k] = 1e-6;
            fd.col(k) = (rhs(s, x + e) - rhs(s, x - e)) / 2e-6;
        }
        jac = std::max(jac, (J - fd).norm() / std::max(1.0, J.norm()));
    }
    if (jac > 1e-6) failures.push_back(fmt("jacobian relative error %.2e", jac));

    // Trivial Floquet multiplier on every converged orbit computed above.
    std::size_t orbits = 0;
    double trivial = 0.0;
    for (const auto& br : g_branches)
        for (const auto& p : br.points) {
            ++orbits;
            trivial = std::max(trivial, p.trivial_deviation);
        }
    if (orbits == 0 || trivial > kTrivialMultiplierTol) failures.push_back(fmt("trivial multiplier off by %.2e", trivial));

    // Rerun from the metadata of written files.
    const auto dir = fs::temp_directory_path() / "lcoguard_acceptance";
    fs::remove_all(dir);
    std::ostringstream sink;
    const std::vector<std::vector<std::string>> runs{
        {"probability", "--eps", "0.05", "--samples", "5000", "--seed", "3"},
        {"bifurcate", "--eps", "0.05", "--mu2", "0.12", "--gamma", "0.985", "--alpha3", "0.3", "--beta3", "0.0136"},
        {"stability-chart", "--eps", "0.05", "--mu1-count", "11", "--mu2-count", "3", "--gamma-count", "11"}};
    int identical = 0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        auto args = runs[i];
        const auto first = dir / ("first" + std::to_string(i) + ".csv");
        args.insert(args.end(), {"--out", first.string()});
        if (run_cli(args, sink, sink) != kExitOk) {
            failures.push_back("run failed: " + runs[i][0]);
            continue;
        }
        const auto meta = read_metadata(first);
        const auto second = dir / ("second" + std::to_string(i) + ".csv");
        if (run_cli({runs[i][0], "--config-json", meta.at("config").dump(), "--out", second.string()}, sink, sink) !=
            kExitOk) {
            failures.push_back("rerun failed: " + runs[i][0]);
            continue;
        }
        if (slurp(first) == slurp(second)) ++identical;
        else failures.push_back("rerun differs: " + runs[i][0]);
    }

    std::string detail = fmt("affinity %.1e, ", affine) + fmt("jacobian %.1e, ", jac) +
                         fmt("trivial multiplier %.1e over ", trivial) + std::to_string(orbits) + " orbits, " +
                         std::to_string(identical) + "/3 identical reruns";
    for (const auto& f : failures) detail += "; " + f;
    return {failures.empty(), detail};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "closed-form tuning", 1e-3, tuning},
        {2, "Routh-Hurwitz vs eigenvalues", 5.0, routh_vs_eigen},
        {3, "boundary peak", 1.0, boundary_peak},
        {4, "double-Hopf identities", 1.0, double_hopf},
        {5, "criticality signs", 1.0, fig10_signs},
        {6, "normal form vs continuation", 30.0, estimate_vs_continuation},
        {7, "bistability structure", 120.0, bistability},
        {8, "secondary Hopf detection", 120.0, secondary_hopf},
        {9, "NES comparison", 60.0, nes_comparison},
        {10, "property suite", 60.0, property_suite},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Verdict o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_budget = secs < c.budget_s;
        const bool pass = o.pass && in_budget;
        if (!pass) ++failed;
        std::printf("[%s] %2d %-30s %.4fs (budget %gs)%s  %s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs,
                    c.budget_s, in_budget ? "" : " over budget", o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
