#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lcoguard/core_model.hpp"
#include "lcoguard/linear_stability.hpp"

namespace lcoguard {

enum class Codimension { single, near_double };
enum class Criticality { supercritical, subcritical, degenerate };
enum class AbsorberRule { ltva, nltva };

const char* to_string(Codimension c) noexcept;
const char* to_string(Criticality c) noexcept;
const char* to_string(AbsorberRule r) noexcept;

inline constexpr double kDegenerateDelta = 1e-10;

/// Linear data at the loss of stability of the trivial equilibrium.
///
/// The critical eigenvalue is lambda1 = sigma + i*omega1 with omega1 > 0.
/// Its eigenvector s1 is scaled so the x1 component equals 1. The columns of
/// T are Re(s1), Im(s1) and a real basis of the remaining eigenspace
/// (Re(s3), Im(s3) for a complex pair, s3 and s4 for real eigenvalues), so
/// that T^-1 W T = [[sigma, omega1], [-omega1, sigma]] (+) the other block.
struct HopfPoint {
    DimensionlessSystem system;  ///< parameters with mu1 = mu1_cr
    double mu1_cr = 0.0;
    double omega1 = 0.0;
    double sigma = 0.0;
    /// d(Re lambda1)/d(mu1), centred difference with step 1e-5.
    double sigma_slope = 0.0;
    std::complex<double> lambda1;
    std::array<std::complex<double>, 2> lambda34{};
    Eigen::Vector4cd s1;
    Matrix4 T;
    Matrix4 T_inv;
    double condition_number = 0.0;
    Codimension codim = Codimension::single;

    bool low_confidence() const noexcept { return codim == Codimension::near_double; }
};

/// Loss of stability along mu1 at fixed (eps, mu2, gamma).
HopfPoint hopf_point(double eps, double mu2, double gamma);

/// Eigen data of `sys` at its own mu1. The critical pair is the one with
/// smallest |Re|, or the one whose frequency is closest to `target_frequency`.
HopfPoint hopf_point_at(const DimensionlessSystem& sys, std::optional<double> target_frequency = {});

/// Same Hopf point with s1 replaced by c * s1 (T and T^-1 rebuilt).
HopfPoint rescale_critical_eigenvector(const HopfPoint& hopf, std::complex<double> c);

/// Cubic terms of the reduced planar system
///   dy1 = ... + d130 y1^3 + d121 y1^2 y2 + d112 y1 y2^2 + d103 y2^3
///   dy2 = ... + d230 y1^3 + d221 y1^2 y2 + d212 y1 y2^2 + d203 y2^3
struct PlanarCubic {
    double d130 = 0.0, d121 = 0.0, d112 = 0.0, d103 = 0.0;
    double d230 = 0.0, d221 = 0.0, d212 = 0.0, d203 = 0.0;

    double delta() const noexcept { return (3.0 * d130 + d112 + d221 + 3.0 * d203) / 8.0; }
};

/// Substitutes x = T (y1, y2, 0, 0) into the cubic part of the field and
/// projects through T^-1. Quadratic absorber terms are rejected; quintic
/// terms do not contribute at cubic order and only add a warning.
PlanarCubic planar_reduction(const DimensionlessSystem& sys, const HopfPoint& hopf,
                             std::vector<std::string>* warnings = nullptr);

/// delta = delta0 + delta_alpha * alpha3 + delta_beta * beta3 at a Hopf point.
struct DeltaDecomposition {
    double delta0 = 0.0;
    double delta_alpha = 0.0;
    double delta_beta = 0.0;
    HopfPoint hopf;
    /// Largest gap between the closed forms and the projection oracle.
    double oracle_residual = 0.0;
    /// The closed forms disagreed with the oracle; oracle values are returned.
    bool transcription_mismatch = false;

    double delta(double alpha3, double beta3) const noexcept {
        return delta0 + delta_alpha * alpha3 + delta_beta * beta3;
    }
};

DeltaDecomposition delta_decomposition(const HopfPoint& hopf);
DeltaDecomposition delta_decomposition(double eps, double mu2, double gamma);

struct NormalFormCoefficients {
    PlanarCubic d;
    double delta0 = 0.0;
    double delta_alpha = 0.0;
    double delta_beta = 0.0;
    double delta = 0.0;
    Criticality criticality = Criticality::degenerate;
    std::vector<std::string> warnings;
};

/// Full cubic normal form of `sys` (its alpha3, beta3) at `hopf`.
NormalFormCoefficients normal_form(const DimensionlessSystem& sys, const HopfPoint& hopf);

Criticality classify(double delta) noexcept;

struct CriticalityResult {
    double delta = 0.0;
    Criticality criticality = Criticality::degenerate;
    DeltaDecomposition decomposition;
};

CriticalityResult delta(double eps, double mu2, double gamma, double alpha3, double beta3);

/// Closed-form criticality coefficients at point C for each eigenvalue pair,
/// with the eigenvector x4 component scaled to 1.
struct DoubleHopfDeltas {
    double delta12 = 0.0;
    double delta34 = 0.0;
};

DoubleHopfDeltas double_hopf_deltas(double eps, double alpha3, double beta3);

/// Nonlinearity compensation: beta3 = eps / (1 + eps)^2 * alpha3.
double beta3_tuning(double eps, double alpha3);

/// alpha3 at which delta changes sign, for beta3 = 0 (ltva) or the
/// compensation rule (nltva). The limits are trimmed to magnitude 1.
struct CriticalAlpha3 {
    double alpha3_cr = 0.0;
    bool unbounded = false;
    double positive_limit = 1.0;  ///< largest safe positive alpha3, capped at 1
    double negative_limit = -1.0; ///< most negative safe alpha3, capped at -1
};

inline constexpr double kAlpha3MapTrim = 1.0;

CriticalAlpha3 critical_alpha3(const DeltaDecomposition& dec, AbsorberRule rule);
CriticalAlpha3 critical_alpha3(double eps, double mu2, double gamma, AbsorberRule rule);

struct DeltaSweepRow {
    double mu2 = 0.0;
    double gamma = 0.0;
    double mu1_cr = 0.0;
    double delta0 = 0.0;
    double delta_alpha = 0.0;
    double delta_beta = 0.0;
    bool near_double = false;
};

/// delta decomposition on a (mu2, gamma) grid, mu2 outer. Nodes without a
/// positive stability boundary are skipped.
std::vector<DeltaSweepRow> delta_sweep(double eps, const Axis& mu2, const Axis& gamma);

/// Fraction of designs with delta < 0 when gamma and mu2 are drawn uniformly
/// within +-1 % and +-5 % of their optima. Deterministic for a given seed and
/// independent of the worker count.
double supercritical_probability(double eps, double alpha3, AbsorberRule rule, std::size_t n_samples,
                                 std::uint64_t seed);

struct ProbabilityRow {
    double alpha3 = 0.0;
    AbsorberRule rule = AbsorberRule::ltva;
    double probability = 0.0;
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;
};

/// Both rules for every alpha3 from one pass over the sampled designs.
/// Each entry equals the corresponding supercritical_probability call.
std::vector<ProbabilityRow> supercritical_probabilities(double eps, const std::vector<double>& alpha3,
                                                        std::size_t n_samples, std::uint64_t seed);

}  // namespace lcoguard
