#include "lcoguard/lco_estimate.hpp"

#include <cmath>
#include <optional>

#include "lcoguard/parallel.hpp"

namespace lcoguard {

LocalLcoEstimate lco_amplitude_local(const HopfPoint& hopf, double delta, double mu1) {
    if (classify(delta) == Criticality::degenerate)
        throw NumericalError("degenerate criticality coefficient: no local amplitude estimate");

    LocalLcoEstimate est;
    est.mu1 = mu1;
    est.mu1_cr = hopf.mu1_cr;
    est.delta = delta;
    est.unstable = delta > 0.0;
    if (std::abs(mu1 - hopf.mu1_cr) > 0.05)
        est.warnings.emplace_back("|mu1 - mu1_cr| > 0.05: outside the range of a local estimate");

    const double radius_sq = -hopf.sigma_slope * (mu1 - hopf.mu1_cr) / delta;
    if (radius_sq < 0.0) return est;
    est.valid = true;
    est.r = std::sqrt(radius_sq);
    // q1 = r (t11 cos(phi) + t12 sin(phi)), maximal at phi = atan2(t12, t11).
    est.q1_max = est.r * std::hypot(hopf.T(0, 0), hopf.T(0, 1));
    return est;
}

LocalLcoEstimate lco_amplitude_local(double eps, double mu2, double gamma, double alpha3, double beta3, double mu1) {
    const auto dec = delta_decomposition(eps, mu2, gamma);
    auto est = lco_amplitude_local(dec.hopf, dec.delta(alpha3, beta3), mu1);
    if (dec.hopf.low_confidence()) est.warnings.emplace_back("near-double Hopf point: estimate is low-confidence");
    return est;
}

std::vector<IsoAmplitudeCell> iso_amplitude_map(double eps, double alpha3, double beta3, double delta_mu1,
                                                const Axis& mu2, const Axis& gamma) {
    if (!(delta_mu1 > 0.0)) throw DomainError("delta_mu1", "must be positive");
    const auto ng = static_cast<std::size_t>(gamma.count);
    const auto total = static_cast<std::size_t>(mu2.count) * ng;
    std::vector<std::optional<IsoAmplitudeCell>> cells(total);
    parallel_for(total, [&](std::size_t idx) {
        const double m2 = mu2.at(static_cast<int>(idx / ng));
        const double g = gamma.at(static_cast<int>(idx % ng));
        if (!(m2 > 0.0) || !(g > 0.0) || !(critical_mu1(eps, m2, g) > 0.0)) return;
        try {
            const auto dec = delta_decomposition(eps, m2, g);
            const double d = dec.delta(alpha3, beta3);
            IsoAmplitudeCell cell{m2, g, dec.hopf.mu1_cr, 0.0, false};
            if (classify(d) != Criticality::degenerate) {
                const auto est = lco_amplitude_local(dec.hopf, d, dec.hopf.mu1_cr + delta_mu1);
                cell.q1_max = est.q1_max;
                cell.valid = est.valid;
            }
            cells[idx] = cell;
        } catch (const NumericalError&) {
        }
    });
    std::vector<IsoAmplitudeCell> out;
    for (auto& c : cells)
        if (c) out.push_back(*c);
    return out;
}

}  // namespace lcoguard
