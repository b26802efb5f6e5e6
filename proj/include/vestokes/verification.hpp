#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vestokes/assembly.hpp"
#include "vestokes/constitutive.hpp"
#include "vestokes/mms.hpp"
#include "vestokes/norms.hpp"

namespace vestokes {

/// Norms of the data (f, A) entering the a-priori and regularity estimates.
/// Pointwise sizes are Euclidean over components, entries and multi-indices.
struct DataNorms {
    double lambda1 = 0.0;
    /// |f|_{H^j_lambda1}, j = 0..2.
    std::map<int, double> f_h;
    /// lambda1^{-1/2} |f|_{L2}, standing in for |f|_{H^-1}.
    double f_hm1 = 0.0;
    double a_linf = 0.0;
    double a_w1inf = 0.0;
    double a_d2_l3 = 0.0;
    /// |A|_{H^3_lambda1}.
    std::map<int, double> a_h;

    double f_l2() const { return f_h.at(0); }
};

struct DataNormOptions {
    /// Composite Gauss cells per axis and points per cell direction.
    int cells = 8;
    int order = 3;
    /// Grid resolution for A(B) when derivatives are differenced.
    int grid_nodes = 33;
};

DataNorms data_norms(const MuFields& mu, const TensorField& b, const std::array<ScalarField, 3>& f, const Vec3& lengths,
                     const DataNormOptions& opts = {});

/// Seminorms of an exact solution for orders P2/P1 cannot represent.
struct ExactSeminorms {
    double d3v = 0.0, d4v = 0.0;
    double d2p = 0.0, d3p = 0.0;
};

ExactSeminorms exact_seminorms(const MMSCase& c, const DataNormOptions& opts = {});

/// Estimate audits for one solve. `grad_v` is asserted; the others are
/// ratio-only (lhs over the right side without its shape constant):
/// p_l2, d2v, grad_p from the discrete solution and, when `exact` is given,
/// d3v, d2p, d4v, d3p from the exact solution.
std::vector<BoundAudit> audit_estimates(const DiscreteNorms& lhs, double alpha, const DataNorms& data,
                                        const ExactSeminorms* exact = nullptr);

struct GuardResult {
    std::string id;
    double coarse = 0.0;
    double fine = 0.0;
    bool ok = true;
};

/// Ratio-only entries present on both levels; a ratio may grow by at most
/// `factor` from the coarse to the fine mesh.
std::vector<GuardResult> blow_up_guard(const std::vector<BoundAudit>& coarse, const std::vector<BoundAudit>& fine,
                                       double factor = 10.0);

struct NamedTensorField {
    std::string name;
    std::array<std::string, 6> components;

    TensorField field() const { return TensorField::expression(components); }
};

/// Smooth unimodular SPD fields on the unit cube used by the bound audits.
std::vector<NamedTensorField> shipped_b_fields();

}  // namespace vestokes
