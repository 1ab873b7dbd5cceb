#include "lcoguard/hopf_normal_form.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "lcoguard/parallel.hpp"

namespace lcoguard {

const char* to_string(Codimension c) noexcept { return c == Codimension::single ? "single" : "near-double"; }

const char* to_string(Criticality c) noexcept {
    switch (c) {
        case Criticality::supercritical: return "supercritical";
        case Criticality::subcritical: return "subcritical";
        case Criticality::degenerate: return "degenerate";
    }
    return "degenerate";
}

const char* to_string(AbsorberRule r) noexcept { return r == AbsorberRule::ltva ? "ltva" : "nltva"; }

namespace {

constexpr double kNearDoubleBand = 1e-3;
constexpr double kSlopeStep = 1e-5;

struct EigenData {
    Eigen::Vector4cd values;
    Eigen::Matrix4cd vectors;
};

EigenData eigen_decompose(const Matrix4& w) {
    Eigen::EigenSolver<Matrix4> solver(w, true);
    if (solver.info() != Eigen::Success) throw NumericalError("eigen decomposition failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

// Scales v so that its largest component is real and positive.
Eigen::Vector4cd canonical_scale(const Eigen::Vector4cd& v) {
    Eigen::Index k = 0;
    v.cwiseAbs().maxCoeff(&k);
    return v / v[k];
}

void rebuild_transformation(HopfPoint& hp, const Eigen::Vector4cd& s1, const Matrix4& other_block_columns) {
    hp.s1 = s1;
    hp.T.col(0) = s1.real();
    hp.T.col(1) = s1.imag();
    hp.T.col(2) = other_block_columns.col(2);
    hp.T.col(3) = other_block_columns.col(3);
    Eigen::JacobiSVD<Matrix4> svd(hp.T);
    const auto& sv = svd.singularValues();
    hp.condition_number = sv[3] > 0.0 ? sv[0] / sv[3] : std::numeric_limits<double>::infinity();
    if (!std::isfinite(hp.condition_number) || hp.condition_number > 1e12)
        throw NumericalError("transformation matrix is singular (defective eigenbasis)");
    hp.T_inv = hp.T.inverse();
}

// Coefficients of a homogeneous cubic in (y1, y2): y1^3, y1^2 y2, y1 y2^2, y2^3.
using Cubic = std::array<double, 4>;

Cubic product(const std::array<double, 2>& a, const std::array<double, 2>& b, const std::array<double, 2>& c) {
    return {a[0] * b[0] * c[0],
            a[0] * b[0] * c[1] + a[0] * b[1] * c[0] + a[1] * b[0] * c[0],
            a[0] * b[1] * c[1] + a[1] * b[0] * c[1] + a[1] * b[1] * c[0],
            a[1] * b[1] * c[1]};
}

Cubic combine(double ca, const Cubic& a, double cb, const Cubic& b, double cc, const Cubic& c) {
    Cubic out{};
    for (std::size_t i = 0; i < 4; ++i) out[i] = ca * a[i] + cb * b[i] + cc * c[i];
    return out;
}

PlanarCubic project(const HopfPoint& hp, double mu1, double alpha3, double beta3) {
    const auto& t = hp.T;
    const auto& ti = hp.T_inv;
    const double eps = hp.system.eps;
    const std::array<double, 2> l1{t(0, 0), t(0, 1)};
    const std::array<double, 2> l2{t(1, 0), t(1, 1)};
    const std::array<double, 2> l3{t(2, 0), t(2, 1)};
    const Cubic self_excitation = product(l1, l1, l2);  // x1^2 x2
    const Cubic duffing = product(l1, l1, l1);          // x1^3
    const Cubic absorber = product(l3, l3, l3);         // x3^3

    const Cubic b2 = combine(-2.0 * mu1, self_excitation, -alpha3, duffing, -beta3 * eps, absorber);
    const Cubic b4 = combine(-2.0 * mu1, self_excitation, -alpha3, duffing, -beta3 * (1.0 + eps), absorber);

    PlanarCubic d;
    const auto row = [&](int r, std::size_t k) { return ti(r, 1) * b2[k] + ti(r, 3) * b4[k]; };
    d.d130 = row(0, 0);
    d.d121 = row(0, 1);
    d.d112 = row(0, 2);
    d.d103 = row(0, 3);
    d.d230 = row(1, 0);
    d.d221 = row(1, 1);
    d.d212 = row(1, 2);
    d.d203 = row(1, 3);
    return d;
}

}  // namespace

HopfPoint hopf_point_at(const DimensionlessSystem& sys, std::optional<double> target_frequency) {
    sys.validate();
    const auto eig = eigen_decompose(linear_matrix(sys));

    int crit = -1;
    for (int i = 0; i < 4; ++i) {
        const auto z = eig.values[i];
        if (z.imag() <= kMarginalBand) continue;
        if (crit < 0) {
            crit = i;
            continue;
        }
        const auto best = eig.values[crit];
        const bool better = target_frequency
                                ? std::abs(z.imag() - *target_frequency) < std::abs(best.imag() - *target_frequency)
                                : std::abs(z.real()) < std::abs(best.real());
        if (better) crit = i;
    }
    if (crit < 0) throw NumericalError("linearization has no complex eigenvalue pair");

    HopfPoint hp;
    hp.system = sys;
    hp.mu1_cr = sys.mu1;
    hp.lambda1 = eig.values[crit];
    hp.sigma = hp.lambda1.real();
    hp.omega1 = hp.lambda1.imag();

    const Eigen::Vector4cd raw = eig.vectors.col(crit);
    if (std::abs(raw[0]) < 1e-12 * raw.norm()) throw NumericalError("critical eigenvector has no x1 component");
    const Eigen::Vector4cd s1 = raw / raw[0];

    // The remaining two eigenvalues: everything except lambda1 and its conjugate.
    int partner = -1;
    for (int i = 0; i < 4; ++i) {
        if (i == crit) continue;
        if (partner < 0 ||
            std::abs(eig.values[i] - std::conj(hp.lambda1)) < std::abs(eig.values[partner] - std::conj(hp.lambda1)))
            partner = i;
    }
    std::vector<int> rest;
    for (int i = 0; i < 4; ++i)
        if (i != crit && i != partner) rest.push_back(i);

    Matrix4 other = Matrix4::Zero();
    const auto z3 = eig.values[rest[0]];
    const auto z4 = eig.values[rest[1]];
    if (std::abs(z3.imag()) > kMarginalBand) {
        const int pick = z3.imag() > 0.0 ? rest[0] : rest[1];
        const Eigen::Vector4cd s3 = canonical_scale(eig.vectors.col(pick));
        other.col(2) = s3.real();
        other.col(3) = s3.imag();
        hp.lambda34 = {eig.values[pick], std::conj(eig.values[pick])};
        if (std::abs(eig.values[pick].real()) < kNearDoubleBand) hp.codim = Codimension::near_double;
    } else {
        int first = rest[0], second = rest[1];
        if (z4.real() > z3.real()) std::swap(first, second);
        other.col(2) = canonical_scale(eig.vectors.col(first)).real();
        other.col(3) = canonical_scale(eig.vectors.col(second)).real();
        hp.lambda34 = {eig.values[first], eig.values[second]};
    }
    rebuild_transformation(hp, s1, other);

    // Real-part slope of the tracked eigenvalue.
    const auto tracked_real = [&](double mu1) {
        const auto values = eigen_decompose(linear_matrix(sys.with_mu1(mu1))).values;
        Eigen::Index k = 0;
        (values.array() - hp.lambda1).abs().minCoeff(&k);
        return values[k].real();
    };
    hp.sigma_slope = (tracked_real(sys.mu1 + kSlopeStep) - tracked_real(sys.mu1 - kSlopeStep)) / (2.0 * kSlopeStep);
    return hp;
}

HopfPoint hopf_point(double eps, double mu2, double gamma) {
    const double mu1_cr = critical_mu1(eps, mu2, gamma);
    if (!(mu1_cr > 0.0)) throw DomainError("mu2", "no positive stability boundary for these parameters");
    DimensionlessSystem sys;
    sys.eps = eps;
    sys.mu1 = mu1_cr;
    sys.mu2 = mu2;
    sys.gamma = gamma;
    return hopf_point_at(sys);
}

HopfPoint rescale_critical_eigenvector(const HopfPoint& hopf, std::complex<double> c) {
    if (c == std::complex<double>(0.0, 0.0)) throw DomainError("c", "rescaling factor must be nonzero");
    HopfPoint out = hopf;
    rebuild_transformation(out, hopf.s1 * c, hopf.T);
    return out;
}

PlanarCubic planar_reduction(const DimensionlessSystem& sys, const HopfPoint& hopf,
                             std::vector<std::string>* warnings) {
    if (sys.beta2 != 0.0)
        throw DomainError("beta2", "quadratic absorber terms need second-order center-manifold corrections");
    if (sys.beta5 != 0.0 && warnings)
        warnings->emplace_back("beta5 ignored: quintic terms do not enter the cubic normal form");
    return project(hopf, hopf.mu1_cr, sys.alpha3, sys.beta3);
}

DeltaDecomposition delta_decomposition(const HopfPoint& hopf) {
    const auto& t = hopf.T;
    const auto& ti = hopf.T_inv;
    const double eps = hopf.system.eps;
    const double mu1 = hopf.mu1_cr;
    const double t11 = t(0, 0), t12 = t(0, 1), t21 = t(1, 0), t22 = t(1, 1), t31 = t(2, 0), t32 = t(2, 1);
    const double h12 = ti(0, 1), h14 = ti(0, 3), h22 = ti(1, 1), h24 = ti(1, 3);

    DeltaDecomposition dec;
    dec.hopf = hopf;
    const double first_row = 3.0 * t11 * t11 * t21 + 2.0 * t11 * t12 * t22 + t12 * t12 * t21;
    const double second_row = t11 * t11 * t22 + 2.0 * t11 * t12 * t21 + 3.0 * t12 * t12 * t22;
    dec.delta0 = -0.25 * mu1 * (h12 * first_row + h14 * first_row + (h22 + h24) * second_row);
    dec.delta_alpha = -3.0 / 8.0 * (t11 * t11 + t12 * t12) * (h12 * t11 + h14 * t11 + t12 * (h22 + h24));
    dec.delta_beta = -3.0 / 8.0 * (t31 * t31 + t32 * t32) *
                     (eps * (h12 * t31 + h14 * t31 + t32 * (h22 + h24)) + h14 * t31 + h24 * t32);

    // Independent route: project the cubic terms at three (alpha3, beta3) points.
    const double o0 = project(hopf, mu1, 0.0, 0.0).delta();
    const double oa = project(hopf, mu1, 1.0, 0.0).delta() - o0;
    const double ob = project(hopf, mu1, 0.0, 1.0).delta() - o0;
    dec.oracle_residual = std::max({std::abs(o0 - dec.delta0), std::abs(oa - dec.delta_alpha),
                                    std::abs(ob - dec.delta_beta)});
    const double scale = std::max({1.0, std::abs(o0), std::abs(oa), std::abs(ob)});
    if (dec.oracle_residual > 1e-9 * scale) {
        dec.transcription_mismatch = true;
        dec.delta0 = o0;
        dec.delta_alpha = oa;
        dec.delta_beta = ob;
    }
    return dec;
}

DeltaDecomposition delta_decomposition(double eps, double mu2, double gamma) {
    return delta_decomposition(hopf_point(eps, mu2, gamma));
}

Criticality classify(double delta) noexcept {
    if (delta < -kDegenerateDelta) return Criticality::supercritical;
    if (delta > kDegenerateDelta) return Criticality::subcritical;
    return Criticality::degenerate;
}

NormalFormCoefficients normal_form(const DimensionlessSystem& sys, const HopfPoint& hopf) {
    NormalFormCoefficients nf;
    nf.d = planar_reduction(sys, hopf, &nf.warnings);
    const auto dec = delta_decomposition(hopf);
    nf.delta0 = dec.delta0;
    nf.delta_alpha = dec.delta_alpha;
    nf.delta_beta = dec.delta_beta;
    nf.delta = nf.d.delta();
    nf.criticality = classify(nf.delta);
    if (hopf.low_confidence()) nf.warnings.emplace_back("near-double Hopf point: single-Hopf analysis is low-confidence");
    return nf;
}

CriticalityResult delta(double eps, double mu2, double gamma, double alpha3, double beta3) {
    CriticalityResult out;
    out.decomposition = delta_decomposition(eps, mu2, gamma);
    out.delta = out.decomposition.delta(alpha3, beta3);
    out.criticality = classify(out.delta);
    return out;
}

DoubleHopfDeltas double_hopf_deltas(double eps, double alpha3, double beta3) {
    if (!(eps > 0.0)) throw DomainError("eps", "must be positive");
    const double root = std::sqrt(eps);
    const double d12 =
        (-eps * root / (1.0 + eps) + 3.0 * root / (1.0 + eps) * alpha3 - 3.0 * (1.0 + eps) / root * beta3) / 8.0;
    const double d34 = 3.0 / 8.0 * (-root * alpha3 + (1.0 + eps) * (1.0 + eps) / root * beta3);
    return {d12, d34};
}

double beta3_tuning(double eps, double alpha3) {
    if (!(eps > 0.0)) throw DomainError("eps", "must be positive");
    return eps / ((1.0 + eps) * (1.0 + eps)) * alpha3;
}

CriticalAlpha3 critical_alpha3(const DeltaDecomposition& dec, AbsorberRule rule) {
    const double eps = dec.hopf.system.eps;
    const double slope =
        rule == AbsorberRule::ltva ? dec.delta_alpha : dec.delta_alpha + dec.delta_beta * beta3_tuning(eps, 1.0);
    CriticalAlpha3 out;
    if (std::abs(slope) < 1e-12) {
        out.unbounded = true;
        out.alpha3_cr = std::numeric_limits<double>::infinity();
        return out;
    }
    out.alpha3_cr = -dec.delta0 / slope;
    if (dec.delta0 >= 0.0) {
        // Already not supercritical at alpha3 = 0.
        out.positive_limit = 0.0;
        out.negative_limit = 0.0;
    } else if (out.alpha3_cr > 0.0) {
        out.positive_limit = std::min(out.alpha3_cr, kAlpha3MapTrim);
    } else {
        out.negative_limit = std::max(out.alpha3_cr, -kAlpha3MapTrim);
    }
    return out;
}

CriticalAlpha3 critical_alpha3(double eps, double mu2, double gamma, AbsorberRule rule) {
    return critical_alpha3(delta_decomposition(eps, mu2, gamma), rule);
}

std::vector<DeltaSweepRow> delta_sweep(double eps, const Axis& mu2, const Axis& gamma) {
    const auto ng = static_cast<std::size_t>(gamma.count);
    const auto total = static_cast<std::size_t>(mu2.count) * ng;
    std::vector<std::optional<DeltaSweepRow>> cells(total);
    parallel_for(total, [&](std::size_t idx) {
        const double m2 = mu2.at(static_cast<int>(idx / ng));
        const double g = gamma.at(static_cast<int>(idx % ng));
        if (!(m2 > 0.0) || !(g > 0.0) || !(critical_mu1(eps, m2, g) > 0.0)) return;
        try {
            const auto dec = delta_decomposition(eps, m2, g);
            cells[idx] = DeltaSweepRow{m2, g, dec.hopf.mu1_cr, dec.delta0, dec.delta_alpha, dec.delta_beta,
                                       dec.hopf.low_confidence()};
        } catch (const NumericalError&) {
        }
    });
    std::vector<DeltaSweepRow> rows;
    for (auto& c : cells)
        if (c) rows.push_back(*c);
    return rows;
}

std::vector<ProbabilityRow> supercritical_probabilities(double eps, const std::vector<double>& alpha3,
                                                        std::size_t n_samples, std::uint64_t seed) {
    if (n_samples < 1) throw DomainError("n_samples", "must be at least 1");
    if (!(eps > 0.0)) throw DomainError("eps", "must be positive");
    const auto opt = optimal_tuning(eps);
    const std::size_t na = alpha3.size();

    // Fixed-size blocks, each with its own generator: the sample stream does
    // not depend on how blocks are spread over workers.
    constexpr std::size_t kBlock = 4096;
    const std::size_t blocks = (n_samples + kBlock - 1) / kBlock;
    // hits[b][2 * a + rule]
    std::vector<std::vector<std::size_t>> hits(blocks, std::vector<std::size_t>(2 * na, 0));
    parallel_for(blocks, [&](std::size_t b) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
        std::mt19937_64 rng(seq);
        const auto uniform = [&rng](double lo, double hi) {
            return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
        };
        const std::size_t end = std::min(n_samples, (b + 1) * kBlock);
        for (std::size_t i = b * kBlock; i < end; ++i) {
            const double g = opt.gamma_opt * uniform(0.99, 1.01);
            const double m2 = opt.mu2_opt * uniform(0.95, 1.05);
            const auto dec = delta_decomposition(eps, m2, g);
            for (std::size_t a = 0; a < na; ++a) {
                if (dec.delta(alpha3[a], 0.0) < 0.0) ++hits[b][2 * a];
                if (dec.delta(alpha3[a], beta3_tuning(eps, alpha3[a])) < 0.0) ++hits[b][2 * a + 1];
            }
        }
    });
    std::vector<ProbabilityRow> out;
    for (std::size_t a = 0; a < na; ++a) {
        for (int r = 0; r < 2; ++r) {
            std::size_t total = 0;
            for (const auto& h : hits) total += h[2 * a + static_cast<std::size_t>(r)];
            out.push_back({alpha3[a], r == 0 ? AbsorberRule::ltva : AbsorberRule::nltva,
                           static_cast<double>(total) / static_cast<double>(n_samples), n_samples, seed});
        }
    }
    return out;
}

double supercritical_probability(double eps, double alpha3, AbsorberRule rule, std::size_t n_samples,
                                 std::uint64_t seed) {
    const auto rows = supercritical_probabilities(eps, {alpha3}, n_samples, seed);
    return rows[rule == AbsorberRule::ltva ? 0 : 1].probability;
}

}  // namespace lcoguard
