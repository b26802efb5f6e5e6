#pragma once

#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "vestokes/field.hpp"

namespace vestokes {

inline constexpr double kLinf = std::numeric_limits<double>::infinity();

/// sum_j lambda^{(k-j)/2} |D^j phi|_{L^p}, j = 0..k. The pointwise size of
/// D^j phi is the Euclidean norm over components and multi-indices of order
/// j (each multi-index once). p = kLinf takes the maximum over samples.
struct DimNorm {
    int k = 0;
    double p = 2.0;
    double lambda = 1.0;
    double value = 0.0;
    /// |D^j phi|_{L^p} for j = 0..k.
    std::vector<double> seminorms;
};

DimNorm dim_norm(const std::vector<ScalarField>& components, int k, double p, double lambda, const SampleSet& s);

/// |D^j phi|_{L^p} alone.
double seminorm(const std::vector<ScalarField>& components, int j, double p, const SampleSet& s);

/// All nine entries of a symmetric tensor field.
std::vector<ScalarField> tensor_entries(const TensorField& t);

/// A(B) sampled at the nodes of a uniform grid, so that derivatives come from
/// grid differences. Constant inputs give a constant field.
TensorField acal_grid_field(const MuFields& mu, const TensorField& b, const Vec3& lengths, int nodes_per_axis);

/// Norm inputs of the higher-order regularity bound.
struct RkInputs {
    /// |f|_{H^j_lambda}, j = 0..k.
    std::map<int, double> f_h;
    std::optional<double> f_hm1;
    /// |A|_{W^{1,inf}_lambda}.
    std::optional<double> a_w1inf;
    /// |D^2 A|_{L^3}.
    std::optional<double> a_d2_l3;
    /// |A|_{H^m_lambda}, m = 3..k+1.
    std::map<int, double> a_h;
};

/// |f|_{L2} + |A|_{W^{1,inf}_lambda} |f|_{H^-1} / alpha.
double h2_bracket(double alpha, double f_l2, double a_w1inf, double f_hm1);

/// |f|_{H^1_lambda} + (|A|_{W^{1,inf}_lambda} + |D^2 A|_{L^3}) h2_bracket / alpha.
double h3_bracket(double alpha, double f_h1, double a_w1inf, double a_d2_l3, double f_l2, double f_hm1);

/// R_k(alpha, lambda1, A, f) for k >= 2. MissingNormInput names the first
/// absent input.
double rk_evaluate(double alpha, double lambda1, const RkInputs& in, int k);

}  // namespace vestokes
