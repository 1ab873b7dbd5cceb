#include "lcoguard/nes_benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include <nlohmann/json.hpp>

#include "lcoguard/hopf_normal_form.hpp"
#include "lcoguard/linear_stability.hpp"
#include "lcoguard/parallel.hpp"

namespace lcoguard {

void NesConfig::validate() const {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("eps", "must be positive");
    if (!(Lambda >= 0.0) || !std::isfinite(Lambda)) throw DomainError("Lambda", "must be non-negative");
    if (!std::isfinite(beta3_nes)) throw DomainError("beta3_nes", "must be finite");
}

DimensionlessSystem NesConfig::system(double mu1, double alpha3) const {
    validate();
    DimensionlessSystem sys;
    sys.eps = eps;
    sys.mu1 = mu1;
    sys.mu2 = 0.0;
    sys.gamma = 0.0;
    sys.alpha3 = alpha3;
    sys.beta3 = beta3_nes;
    sys.lambda = Lambda;
    sys.validate();
    return sys;
}

double nes_mu1_max(double eps, double Lambda) {
    if (!(eps > 0.0)) throw DomainError("eps", "must be positive");
    if (!(Lambda >= 0.0)) throw DomainError("Lambda", "must be non-negative");
    return 0.5 * eps * Lambda / (Lambda * Lambda + 1.0);
}

NesBoundary nes_boundary(double eps, double Lambda_min, double Lambda_max, int count) {
    if (!(Lambda_min >= 0.0)) throw DomainError("Lambda_min", "must be non-negative");
    if (!(Lambda_max >= Lambda_min)) throw DomainError("Lambda_max", "must not be below Lambda_min");
    if (count < 1) throw DomainError("count", "must be positive");
    NesBoundary b;
    const Axis axis{Lambda_min, Lambda_max, count};
    for (int i = 0; i < count; ++i) {
        b.Lambda.push_back(axis.at(i));
        b.mu1_max.push_back(nes_mu1_max(eps, b.Lambda.back()));
    }
    // d/dLambda [Lambda / (Lambda^2 + 1)] vanishes at Lambda = 1.
    b.Lambda_at_max = std::clamp(1.0, Lambda_min, Lambda_max);
    b.global_max = nes_mu1_max(eps, b.Lambda_at_max);
    return b;
}

const char* to_string(Outcome o) noexcept {
    switch (o) {
        case Outcome::decays_to_zero: return "decays_to_zero";
        case Outcome::settles_on_lco: return "settles_on_lco";
        case Outcome::inconclusive: return "inconclusive";
    }
    return "unknown";
}

TimeSeriesCase run_case(const std::string& name, const VectorField& field, const StateVector& x0,
                        const ComparisonOptions& opts) {
    if (!(opts.window > 0.0) || !(opts.max_horizon >= opts.window)) throw DomainError("window", "invalid horizon");
    TimeSeriesCase out;
    out.name = name;
    out.trajectory.t.push_back(0.0);
    out.trajectory.x.push_back(x0);
    StateVector x = x0;
    double t0 = 0.0;
    std::optional<double> previous;
    while (t0 + opts.window <= opts.max_horizon + 1e-9) {
        const auto tr = integrate(field, x, opts.window, opts.tol, opts.sample_dt);
        double peak = 0.0;
        for (std::size_t i = 1; i < tr.x.size(); ++i) {
            peak = std::max(peak, std::abs(tr.x[i][0]));
            out.trajectory.t.push_back(t0 + tr.t[i]);
            out.trajectory.x.push_back(tr.x[i]);
        }
        x = tr.x.back();
        t0 += opts.window;
        out.horizon = t0;
        out.trailing_amplitude = peak;
        if (peak < opts.decay_threshold) {
            out.outcome = Outcome::decays_to_zero;
            return out;
        }
        if (previous && std::abs(peak - *previous) < opts.drift_tol * peak) {
            out.outcome = Outcome::settles_on_lco;
            return out;
        }
        previous = peak;
    }
    out.outcome = Outcome::inconclusive;
    return out;
}

ComparisonReport compare_time_series(double eps, double mu1, double alpha3, const ComparisonOptions& opts) {
    if (!(mu1 > 0.0)) throw DomainError("mu1", "must be positive");
    if (!(eps > 0.0)) throw DomainError("eps", "must be positive");
    ComparisonReport rep;
    rep.eps = eps;
    rep.mu1 = mu1;
    rep.alpha3 = alpha3;
    rep.x0 = StateVector(0.01, 0.0, 0.0, 0.0);

    const auto tuning = optimal_tuning(eps);
    DimensionlessSystem nltva;
    nltva.eps = eps;
    nltva.mu1 = mu1;
    nltva.mu2 = tuning.mu2_opt;
    nltva.gamma = tuning.gamma_opt;
    nltva.alpha3 = alpha3;
    nltva.beta3 = beta3_tuning(eps, alpha3);
    const NesConfig nes{eps, opts.nes_Lambda, opts.nes_beta3};

    const std::vector<std::pair<std::string, VectorField>> runs{
        {"no_absorber", VectorField::primary_only(nltva)},
        {"nes", VectorField(nes.system(mu1, alpha3))},
        {"nltva", VectorField(nltva)},
    };
    rep.cases.resize(runs.size());
    parallel_for(runs.size(), [&](std::size_t i) { rep.cases[i] = run_case(runs[i].first, runs[i].second, rep.x0, opts); });
    return rep;
}

void to_json(nlohmann::json& j, const ComparisonReport& r) {
    j = nlohmann::json{{"eps", r.eps},
                       {"mu1", r.mu1},
                       {"alpha3", r.alpha3},
                       {"x0", {r.x0[0], r.x0[1], r.x0[2], r.x0[3]}},
                       {"cases", nlohmann::json::array()}};
    for (const auto& c : r.cases)
        j["cases"].push_back({{"case", c.name},
                              {"outcome", to_string(c.outcome)},
                              {"trailing_amplitude", c.trailing_amplitude},
                              {"horizon", c.horizon}});
}

NesBranchResult nes_branch(const NesConfig& cfg, double alpha3, const ContinuationOptions& opts) {
    const auto sys = cfg.system(0.0, alpha3);
    return {cfg, branch_from_hopf(sys, opts)};
}

std::vector<NesBranchResult> nes_branches(double eps, double alpha3, NesSweep sweep, double fixed,
                                          const std::vector<double>& values, const ContinuationOptions& opts) {
    std::vector<std::optional<NesBranchResult>> slots(values.size());
    parallel_for(values.size(), [&](std::size_t i) {
        NesConfig cfg{eps, fixed, values[i]};
        if (sweep == NesSweep::vary_Lambda) cfg = NesConfig{eps, values[i], fixed};
        slots[i] = nes_branch(cfg, alpha3, opts);
    });
    std::vector<NesBranchResult> out;
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace lcoguard
