#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vestokes/field.hpp"
#include "vestokes/tensor.hpp"

namespace vestokes {

/// Constant viscosity parameters of A(B) = mu1 I + mu2 B + mu3 B^{-1}.
struct MuTriple {
    double mu1 = 1.0, mu2 = 0.0, mu3 = 0.0;

    double sum() const { return mu1 + mu2 + mu3; }
    /// mu1 + mu2 + mu3 > 0, i.e. g(1) > 0.
    bool thermodynamic() const { return sum() > 0.0; }
    MuFields fields() const { return MuFields::constant(mu1, mu2, mu3); }
};

/// A(B) at a point for given parameter values.
SymTensor3 acal(double mu1, double mu2, double mu3, const SymTensor3& b);
SymTensor3 acal(const MuTriple& mu, const SymTensor3& b);
SymTensor3 acal(const MuFields& mu, const TensorField& b, const Vec3& x);

/// g(lambda) = mu1 + mu2 lambda + mu3 / lambda; DomainError if lambda <= 0.
double g_eval(const MuTriple& mu, double lambda);

/// One inequality check. Explicit-constant bounds carry `satisfied`;
/// bounds with an unspecified universal constant are ratio-only.
struct BoundAudit {
    std::string id;
    std::string statement;
    double lhs = 0.0;
    double rhs = 0.0;
    std::optional<bool> satisfied;
    Vec3 worst_point{0.0, 0.0, 0.0};
    std::string note;

    bool ratio_only() const { return !satisfied.has_value(); }
    /// lhs / rhs, or 0 when both vanish.
    double ratio() const;
};

/// satisfied <=> lhs <= rhs * (1 + 1e-12).
bool bound_holds(double lhs, double rhs);

/// Sampled sup-norm and L^p audits of B^{-1} and A(B).
///
/// Entry ids: `binv_linf`, `acal_linf` (never need derivatives),
/// `d_binv_linf`, `d_acal_linf` (first derivatives; asserted only when B is
/// unimodular at every sample, otherwise reported as ratios), and the
/// ratio-only `binv_l3`, `d_binv_l3`, `d2_binv_l3`, `binv_l2`, `d_binv_l2`,
/// `d2_binv_l2`. Pointwise norms are the entrywise maximum for L^inf terms
/// and the Euclidean norm over components and derivative multi-indices for
/// L^p terms.
///
/// Throws NonDifferentiableField when derivative terms cannot be formed,
/// SingularTensor when B is singular at a sample.
std::vector<BoundAudit> audit_bounds(const MuFields& mu, const TensorField& b, const SampleSet& samples);

}  // namespace vestokes
