#include "vestokes/constitutive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "vestokes/errors.hpp"

namespace vestokes {

SymTensor3 acal(double mu1, double mu2, double mu3, const SymTensor3& b) {
    SymTensor3 a = SymTensor3::identity() * mu1 + b * mu2;
    if (mu3 != 0.0) a += ch_inverse(b) * mu3;
    return a;
}

SymTensor3 acal(const MuTriple& mu, const SymTensor3& b) { return acal(mu.mu1, mu.mu2, mu.mu3, b); }

SymTensor3 acal(const MuFields& mu, const TensorField& b, const Vec3& x) {
    return acal(mu.mu1.value(x), mu.mu2.value(x), mu.mu3.value(x), b.value(x));
}

double g_eval(const MuTriple& mu, double lambda) {
    if (!(lambda > 0.0)) {
        std::ostringstream os;
        os << "g(lambda) needs lambda > 0, got " << lambda;
        throw DomainError(os.str());
    }
    return mu.mu1 + mu.mu2 * lambda + mu.mu3 / lambda;
}

double BoundAudit::ratio() const {
    if (rhs == 0.0) return lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return lhs / rhs;
}

bool bound_holds(double lhs, double rhs) { return lhs <= rhs * (1.0 + 1e-12); }

namespace {

// Running supremum with its location.
struct Sup {
    double value = 0.0;
    Vec3 at{0.0, 0.0, 0.0};
    void add(double v, const Vec3& x) {
        if (v > value) {
            value = v;
            at = x;
        }
    }
};

// Running weighted sum of |g|^p.
struct LpAccum {
    double p;
    double sum = 0.0;
    void add(double g, double w) { sum += w * std::pow(std::abs(g), p); }
    double norm() const { return std::pow(sum, 1.0 / p); }
};

double max_abs3(const Vec3& v) { return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])}); }

}  // namespace

std::vector<BoundAudit> audit_bounds(const MuFields& mu, const TensorField& b, const SampleSet& samples) {
    Sup b_inf, binv_inf, detinv_inf, a_inf, db_inf, dbinv_inf, da_inf;
    Sup mu1_inf, mu2_inf, mu3_inf, dmu1_inf, dmu2_inf, dmu3_inf;
    LpAccum binv_l3{3}, b_l6{6}, dbinv_l3{3}, db_l6{6}, d2binv_l3{3}, d2b_l3{3};
    LpAccum binv_l2{2}, b_l4{4}, dbinv_l2{2}, b_l12{12}, db_l125{12.0 / 5.0}, d2binv_l2{2}, db_l4{4}, d2b_l2{2};
    bool unimodular = true;

    for (std::size_t s = 0; s < samples.size(); ++s) {
        const Vec3& x = samples.points[s];
        const double w = samples.weights.empty() ? 1.0 : samples.weights[s];
        const SymTensor3 bx = b.value(x);
        const SymTensor3 binv = ch_inverse(bx);
        const double m1 = mu.mu1.value(x), m2 = mu.mu2.value(x), m3 = mu.mu3.value(x);
        const Vec3 g1 = mu.mu1.gradient(x), g2 = mu.mu2.gradient(x), g3 = mu.mu3.gradient(x);
        const bool unimod_here = is_unimodular(bx);
        unimodular = unimodular && unimod_here;

        b_inf.add(bx.max_abs(), x);
        binv_inf.add(binv.max_abs(), x);
        detinv_inf.add(std::abs(1.0 / bx.det()), x);
        a_inf.add((SymTensor3::identity() * m1 + bx * m2 + binv * m3).max_abs(), x);
        mu1_inf.add(std::abs(m1), x);
        mu2_inf.add(std::abs(m2), x);
        mu3_inf.add(std::abs(m3), x);
        dmu1_inf.add(max_abs3(g1), x);
        dmu2_inf.add(max_abs3(g2), x);
        dmu3_inf.add(max_abs3(g3), x);

        std::array<SymTensor3, 3> db, dbinv;
        double db_sq = 0.0, dbinv_sq = 0.0;
        for (int i = 0; i < 3; ++i) {
            db[i] = b.derivative(x, i);
            dbinv[i] = unimod_here ? d_inverse(bx, db[i]) : d_inverse_general(binv, db[i]);
            const SymTensor3 da = bx * g2[i] + db[i] * m2 + binv * g3[i] + dbinv[i] * m3 +
                                  SymTensor3::identity() * g1[i];
            db_inf.add(db[i].max_abs(), x);
            dbinv_inf.add(dbinv[i].max_abs(), x);
            da_inf.add(da.max_abs(), x);
            db_sq += contract(db[i], db[i]);
            dbinv_sq += contract(dbinv[i], dbinv[i]);
        }
        double d2b_sq = 0.0, d2binv_sq = 0.0;
        for (int k = 0; k < 6; ++k) {
            const int i = kSlotIndex[k][0], j = kSlotIndex[k][1];
            const SymTensor3 d2b = b.second_derivative(x, i, j);
            const SymTensor3 d2binv = unimod_here ? d2_inverse(bx, db[i], db[j], d2b)
                                                  : d2_inverse_general(binv, db[i], db[j], d2b);
            d2b_sq += contract(d2b, d2b);
            d2binv_sq += contract(d2binv, d2binv);
        }
        const double bn = bx.norm(), binvn = binv.norm();
        const double dbn = std::sqrt(db_sq), dbinvn = std::sqrt(dbinv_sq);
        const double d2bn = std::sqrt(d2b_sq), d2binvn = std::sqrt(d2binv_sq);

        binv_l3.add(binvn, w);
        b_l6.add(bn, w);
        dbinv_l3.add(dbinvn, w);
        db_l6.add(dbn, w);
        d2binv_l3.add(d2binvn, w);
        d2b_l3.add(d2bn, w);
        binv_l2.add(binvn, w);
        b_l4.add(bn, w);
        dbinv_l2.add(dbinvn, w);
        b_l12.add(bn, w);
        db_l125.add(dbn, w);
        d2binv_l2.add(d2binvn, w);
        db_l4.add(dbn, w);
        d2b_l2.add(d2bn, w);
    }

    std::vector<BoundAudit> out;
    auto asserted = [&](std::string id, std::string stmt, double lhs, double rhs, const Vec3& worst) {
        BoundAudit a{std::move(id), std::move(stmt), lhs, rhs, bound_holds(lhs, rhs), worst, {}};
        out.push_back(std::move(a));
    };
    auto ratio = [&](std::string id, std::string stmt, double lhs, double rhs, const Vec3& worst, std::string note) {
        BoundAudit a{std::move(id), std::move(stmt), lhs, rhs, std::nullopt, worst, std::move(note)};
        out.push_back(std::move(a));
    };

    const double bsup = b_inf.value;
    asserted("binv_linf", "|B^-1|_inf <= 15 |1/det B|_inf |B|_inf^2", binv_inf.value,
             15.0 * detinv_inf.value * bsup * bsup, binv_inf.at);
    asserted("acal_linf", "|A(B)|_inf <= |mu1| + |mu2||B| + 15|mu3||1/det B||B|^2", a_inf.value,
             mu1_inf.value + mu2_inf.value * bsup + 15.0 * mu3_inf.value * detinv_inf.value * bsup * bsup, a_inf.at);

    const double d_binv_rhs = 20.0 * bsup * db_inf.value;
    const double d_acal_rhs = dmu1_inf.value + dmu2_inf.value * bsup + mu2_inf.value * db_inf.value +
                              9.0 * dmu3_inf.value * bsup * bsup + 20.0 * mu3_inf.value * bsup * db_inf.value;
    if (unimodular) {
        asserted("d_binv_linf", "|D(B^-1)|_inf <= 20 |B|_inf |DB|_inf (det B = 1)", dbinv_inf.value, d_binv_rhs,
                 dbinv_inf.at);
        asserted("d_acal_linf",
                 "|DA(B)|_inf <= |Dmu1| + |Dmu2||B| + |mu2||DB| + 9|Dmu3||B|^2 + 20|mu3||B||DB| (det B = 1)",
                 da_inf.value, d_acal_rhs, da_inf.at);
    } else {
        const std::string why = "B is not unimodular at every sample; bound not asserted";
        ratio("d_binv_linf", "|D(B^-1)|_inf <= 20 |B|_inf |DB|_inf (det B = 1)", dbinv_inf.value, d_binv_rhs,
              dbinv_inf.at, why);
        ratio("d_acal_linf",
              "|DA(B)|_inf <= |Dmu1| + |Dmu2||B| + |mu2||DB| + 9|Dmu3||B|^2 + 20|mu3||B||DB| (det B = 1)",
              da_inf.value, d_acal_rhs, da_inf.at, why);
    }

    const std::string universal = "universal constant c unspecified; ratio lhs/rhs reported";
    const Vec3 origin{0.0, 0.0, 0.0};
    const double b6 = b_l6.norm(), db6 = db_l6.norm(), b4 = b_l4.norm(), db4 = db_l4.norm();
    ratio("binv_l3", "|B^-1|_L3 <= c |B|_L6^2", binv_l3.norm(), b6 * b6, origin, universal);
    ratio("d_binv_l3", "|D(B^-1)|_L3 <= c |B|_L6 |DB|_L6", dbinv_l3.norm(), b6 * db6, origin, universal);
    ratio("d2_binv_l3", "|D2(B^-1)|_L3 <= c (|DB|_L6^2 + |B|_inf |D2B|_L3)", d2binv_l3.norm(),
          db6 * db6 + bsup * d2b_l3.norm(), origin, universal);
    ratio("binv_l2", "|B^-1|_L2 <= c |B|_L4^2", binv_l2.norm(), b4 * b4, origin, universal);
    ratio("d_binv_l2", "|D(B^-1)|_L2 <= c |B|_L12 |DB|_L12/5^2", dbinv_l2.norm(),
          b_l12.norm() * db_l125.norm() * db_l125.norm(), origin, universal);
    ratio("d2_binv_l2", "|D2(B^-1)|_L2 <= c (|DB|_L4^2 + |B|_inf |D2B|_L2)", d2binv_l2.norm(),
          db4 * db4 + bsup * d2b_l2.norm(), origin, universal);
    return out;
}

}  // namespace vestokes
