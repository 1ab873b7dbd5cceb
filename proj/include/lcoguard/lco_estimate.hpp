#pragma once

#include <string>
#include <vector>

#include "lcoguard/hopf_normal_form.hpp"

namespace lcoguard {

/// Leading-order LCO amplitude near the Hopf point.
struct LocalLcoEstimate {
    double r = 0.0;       ///< normal-form radius
    double q1_max = 0.0;  ///< peak |q1| of the reconstructed harmonic
    double mu1 = 0.0;
    double mu1_cr = 0.0;
    double delta = 0.0;
    /// The radius is real: -sigma' (mu1 - mu1_cr) / delta >= 0.
    bool valid = false;
    /// delta > 0, so the predicted cycle is the unstable one.
    bool unstable = false;
    std::vector<std::string> warnings;
};

/// Estimate from a Hopf point and its criticality coefficient.
LocalLcoEstimate lco_amplitude_local(const HopfPoint& hopf, double delta, double mu1);

LocalLcoEstimate lco_amplitude_local(double eps, double mu2, double gamma, double alpha3, double beta3, double mu1);

struct IsoAmplitudeCell {
    double mu2 = 0.0;
    double gamma = 0.0;
    double mu1_cr = 0.0;
    double q1_max = 0.0;
    bool valid = false;
};

/// q1_max at mu1 = mu1_cr + delta_mu1 over a (mu2, gamma) grid, mu2 outer.
/// Grid nodes without a positive stability boundary are skipped.
std::vector<IsoAmplitudeCell> iso_amplitude_map(double eps, double alpha3, double beta3, double delta_mu1,
                                                const Axis& mu2, const Axis& gamma);

}  // namespace lcoguard
