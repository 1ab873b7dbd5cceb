#include "lcoguard/core_model.hpp"

#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

namespace lcoguard {

namespace {

void require_finite(const std::string& field, double value) {
    if (!std::isfinite(value)) throw DomainError(field, "must be finite");
}

void require_positive(const std::string& field, double value) {
    require_finite(field, value);
    if (value <= 0.0) throw DomainError(field, "must be positive, got " + std::to_string(value));
}

void require_non_negative(const std::string& field, double value) {
    require_finite(field, value);
    if (value < 0.0) throw DomainError(field, "must be non-negative, got " + std::to_string(value));
}

}  // namespace

void PhysicalSystem::validate() const {
    require_positive("m1", m1);
    require_positive("m2", m2);
    require_positive("k1", k1);
    require_non_negative("k2", k2);
    require_non_negative("c2", c2);
    require_finite("c1", c1);
    require_finite("knl1", knl1);
    require_finite("knl2_2", knl2_2);
    require_finite("knl2_3", knl2_3);
    require_finite("knl2_5", knl2_5);
}

void DimensionlessSystem::validate() const {
    require_positive("eps", eps);
    require_finite("mu1", mu1);
    require_finite("alpha3", alpha3);
    require_finite("beta2", beta2);
    require_finite("beta3", beta3);
    require_finite("beta5", beta5);
    if (lambda) {
        require_non_negative("lambda", *lambda);
        require_finite("gamma", gamma);
        if (gamma != 0.0) throw DomainError("gamma", "must be 0 when lambda (NES damping) is set");
    } else {
        require_positive("gamma", gamma);
        require_non_negative("mu2", mu2);
    }
}

DimensionlessSystem nondimensionalize(const PhysicalSystem& phys) {
    phys.validate();
    const double wn1 = std::sqrt(phys.k1 / phys.m1);
    const double wn2 = std::sqrt(phys.k2 / phys.m2);

    DimensionlessSystem sys;
    sys.eps = phys.m2 / phys.m1;
    sys.mu1 = phys.c1 / (2.0 * std::sqrt(phys.k1 * phys.m1));
    sys.gamma = wn2 / wn1;
    sys.alpha3 = phys.knl1 / phys.k1;
    sys.beta2 = phys.knl2_2 / (phys.k1 * sys.eps);
    sys.beta3 = phys.knl2_3 / (phys.k1 * sys.eps);
    sys.beta5 = phys.knl2_5 / (phys.k1 * sys.eps);
    if (phys.k2 == 0.0) {
        sys.mu2 = 0.0;
        sys.lambda = phys.c2 / (phys.m2 * wn1);
    } else {
        sys.mu2 = phys.c2 / (2.0 * phys.m2 * wn2);
    }
    return sys;
}

PhysicalSystem redimensionalize(const DimensionlessSystem& sys, double m1, double k1) {
    sys.validate();
    require_positive("m1", m1);
    require_positive("k1", k1);
    const double wn1 = std::sqrt(k1 / m1);
    const double wn2 = sys.gamma * wn1;

    PhysicalSystem phys;
    phys.m1 = m1;
    phys.k1 = k1;
    phys.m2 = sys.eps * m1;
    phys.c1 = 2.0 * sys.mu1 * std::sqrt(k1 * m1);
    phys.knl1 = sys.alpha3 * k1;
    phys.k2 = phys.m2 * wn2 * wn2;
    phys.c2 = sys.lambda ? *sys.lambda * phys.m2 * wn1 : 2.0 * sys.mu2 * phys.m2 * wn2;
    phys.knl2_2 = sys.beta2 * k1 * sys.eps;
    phys.knl2_3 = sys.beta3 * k1 * sys.eps;
    phys.knl2_5 = sys.beta5 * k1 * sys.eps;
    return phys;
}

VectorField::VectorField(const DimensionlessSystem& sys)
    : mu1_(sys.mu1),
      alpha3_(sys.alpha3),
      stiffness_(sys.absorber_stiffness()),
      damping_(sys.absorber_damping()),
      beta2_(sys.beta2),
      beta3_(sys.beta3),
      beta5_(sys.beta5),
      primary_coupling_(sys.eps),
      relative_coupling_(1.0 + sys.eps) {}

VectorField VectorField::primary_only(const DimensionlessSystem& sys) {
    VectorField f(sys);
    f.primary_coupling_ = 0.0;
    return f;
}

StateVector VectorField::operator()(const StateVector& x) const noexcept {
    const double x1 = x[0], x2 = x[1], x3 = x[2], x4 = x[3];
    const double x3sq = x3 * x3;
    // Primary restoring and self-excitation terms, shared by rows 2 and 4.
    const double primary = -x1 + 2.0 * mu1_ * x2 * (1.0 - x1 * x1) - alpha3_ * x1 * x1 * x1;
    const double absorber = stiffness_ * x3 + damping_ * x4 + beta2_ * x3sq + beta3_ * x3sq * x3 +
                            beta5_ * x3sq * x3sq * x3;
    return {x2, primary - primary_coupling_ * absorber, x4, primary - relative_coupling_ * absorber};
}

Matrix4 VectorField::jacobian(const StateVector& x) const noexcept {
    const double x1 = x[0], x2 = x[1], x3 = x[2];
    const double x3sq = x3 * x3;
    const double dp_dx1 = -1.0 - 4.0 * mu1_ * x1 * x2 - 3.0 * alpha3_ * x1 * x1;
    const double dp_dx2 = 2.0 * mu1_ * (1.0 - x1 * x1);
    const double da_dx3 = stiffness_ + 2.0 * beta2_ * x3 + 3.0 * beta3_ * x3sq + 5.0 * beta5_ * x3sq * x3sq;
    const double da_dx4 = damping_;

    Matrix4 jac;
    jac << 0.0, 1.0, 0.0, 0.0,
           dp_dx1, dp_dx2, -primary_coupling_ * da_dx3, -primary_coupling_ * da_dx4,
           0.0, 0.0, 0.0, 1.0,
           dp_dx1, dp_dx2, -relative_coupling_ * da_dx3, -relative_coupling_ * da_dx4;
    return jac;
}

StateVector VectorField::parameter_derivative(const StateVector& x) const noexcept {
    const double d = 2.0 * x[1] * (1.0 - x[0] * x[0]);
    return {0.0, d, 0.0, d};
}

Matrix4 VectorField::linear_matrix() const noexcept { return jacobian(StateVector::Zero()); }

StateVector rhs(const DimensionlessSystem& sys, const StateVector& x) { return VectorField(sys)(x); }

Matrix4 jacobian(const DimensionlessSystem& sys, const StateVector& x) {
    return VectorField(sys).jacobian(x);
}

Matrix4 linear_matrix(const DimensionlessSystem& sys) {
    const double e = sys.eps;
    const double k = sys.absorber_stiffness();
    const double c = sys.absorber_damping();
    Matrix4 w;
    w << 0.0, 1.0, 0.0, 0.0,
         -1.0, 2.0 * sys.mu1, -k * e, -c * e,
         0.0, 0.0, 0.0, 1.0,
         -1.0, 2.0 * sys.mu1, -k * (1.0 + e), -c * (1.0 + e);
    return w;
}

void to_json(nlohmann::json& j, const DimensionlessSystem& sys) {
    j = nlohmann::json{{"eps", sys.eps},       {"mu1", sys.mu1},       {"mu2", sys.mu2},
                       {"gamma", sys.gamma},   {"alpha3", sys.alpha3}, {"beta2", sys.beta2},
                       {"beta3", sys.beta3},   {"beta5", sys.beta5}};
    if (sys.lambda) j["lambda"] = *sys.lambda;
}

void from_json(const nlohmann::json& j, DimensionlessSystem& sys) {
    if (!j.is_object()) throw DomainError("system", "expected a JSON object");
    static const std::set<std::string> known{"eps",   "mu1",   "mu2",   "gamma", "alpha3",
                                             "beta2", "beta3", "beta5", "lambda"};
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) throw DomainError(key, "unknown key");
        if (!value.is_number()) throw DomainError(key, "expected a number");
    }
    const auto get = [&](const char* key, double fallback) {
        return j.contains(key) ? j.at(key).get<double>() : fallback;
    };
    if (!j.contains("eps")) throw DomainError("eps", "required key missing");
    DimensionlessSystem out;
    out.eps = j.at("eps").get<double>();
    require_positive("eps", out.eps);
    // Absent linear absorber parameters default to the optimal tuning for eps.
    out.mu1 = get("mu1", 0.0);
    out.mu2 = get("mu2", j.contains("lambda") ? 0.0 : 0.5 * std::sqrt(out.eps / (1.0 + out.eps)));
    out.gamma = get("gamma", j.contains("lambda") ? 0.0 : 1.0 / std::sqrt(1.0 + out.eps));
    out.alpha3 = get("alpha3", 0.0);
    out.beta2 = get("beta2", 0.0);
    out.beta3 = get("beta3", 0.0);
    out.beta5 = get("beta5", 0.0);
    if (j.contains("lambda")) out.lambda = j.at("lambda").get<double>();
    out.validate();
    sys = out;
}

}  // namespace lcoguard
