#pragma once

#include <array>
#include <complex>
#include <vector>

#include "lcoguard/core_model.hpp"

namespace lcoguard {

/// Characteristic polynomial a4 z^4 + a3 z^3 + a2 z^2 + a1 z + a0 of the
/// linearization at the trivial equilibrium.
struct CharPoly {
    double a4 = 1.0;
    double a3 = 0.0;
    double a2 = 0.0;
    double a1 = 0.0;
    double a0 = 0.0;
};

/// Strict Routh-Hurwitz conditions, in the order a3, a2, a1, a0, e2, e3.
struct HurwitzFlags {
    bool a3 = false;
    bool a2 = false;
    bool a1 = false;
    bool a0 = false;
    bool e2 = false;
    bool e3 = false;

    bool all() const noexcept { return a3 && a2 && a1 && a0 && e2 && e3; }
};

struct StabilityReport {
    CharPoly coeffs;
    double e2 = 0.0;
    double e3 = 0.0;
    HurwitzFlags condition_flags;
    std::array<std::complex<double>, 4> eigenvalues{};
    /// Complex-conjugate eigenvalue pairs with real part above 1e-9.
    int unstable_pairs = 0;
    bool stable = false;
    /// Some Hurwitz quantity lies within 1e-9 of zero.
    bool marginal = false;
    /// a3 == 0 exactly, so e2 and e3 are undefined.
    bool degenerate = false;
};

struct TuningResult {
    double gamma_opt = 0.0;
    double mu2_opt = 0.0;
    double mu1_max = 0.0;
};

/// A point in the (mu1, gamma) section plane.
struct SectionPoint {
    double mu1 = 0.0;
    double gamma = 0.0;
};

struct PointsAB {
    SectionPoint a;
    SectionPoint b;
};

struct Axis {
    double min = 0.0;
    double max = 0.0;
    int count = 1;

    double at(int i) const noexcept {
        return count <= 1 ? min : min + (max - min) * static_cast<double>(i) / (count - 1);
    }
};

struct ChartNode {
    double mu1 = 0.0;
    double mu2 = 0.0;
    double gamma = 0.0;
    bool stable = false;
    int unstable_pairs = 0;
    /// The verdict differs from at least one axis-neighbour.
    bool boundary = false;
};

/// Nodes ordered with mu1 fastest, then gamma, then mu2.
struct StabilityChart {
    Axis mu1;
    Axis mu2;
    Axis gamma;
    std::vector<ChartNode> nodes;

    std::size_t index(int i_mu1, int i_mu2, int i_gamma) const noexcept {
        return static_cast<std::size_t>((i_mu2 * gamma.count + i_gamma) * mu1.count + i_mu1);
    }
    const ChartNode& at(int i_mu1, int i_mu2, int i_gamma) const { return nodes[index(i_mu1, i_mu2, i_gamma)]; }
    ChartNode& at(int i_mu1, int i_mu2, int i_gamma) { return nodes[index(i_mu1, i_mu2, i_gamma)]; }
};

struct DoubleHopfPoint {
    double mu1 = 0.0;
    double mu2 = 0.0;
    double gamma = 0.0;
};

inline constexpr double kMarginalBand = 1e-9;

CharPoly char_poly(const DimensionlessSystem& sys);
StabilityReport routh_hurwitz(const DimensionlessSystem& sys);

/// Eigenvalues of the linearization, sorted by descending real part then imaginary part.
std::array<std::complex<double>, 4> eigenvalues(const DimensionlessSystem& sys);
int count_unstable_pairs(const std::array<std::complex<double>, 4>& eig);

/// Supremum of mu1 >= 0 keeping the trivial equilibrium stable (0 if none).
double critical_mu1(double eps, double mu2, double gamma);

PointsAB points_ab(double eps, double mu2);
TuningResult optimal_tuning(double eps);

StabilityChart stability_chart(double eps, const Axis& mu1, const Axis& mu2, const Axis& gamma);

/// Double Hopf points for mu2 values sampled on `mu2_axis`. Points with
/// mu2 > mu2_opt are dropped because the locus ends at point C.
std::vector<DoubleHopfPoint> double_hopf_locus(double eps, const Axis& mu2_axis);

}  // namespace lcoguard
