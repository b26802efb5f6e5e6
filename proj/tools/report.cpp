#include "report.hpp"

namespace vestokes::cli {

namespace {

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(); }

}  // namespace

Json to_json(const Vec3& x) { return Json::array({x[0], x[1], x[2]}); }

Json to_json(const IntervalSet& s) {
    Json parts = Json::array();
    for (const auto& i : s.parts()) parts.push_back(Json::array({i.lo, std::isinf(i.hi) ? Json("inf") : Json(i.hi)}));
    return parts;
}

Json to_json(const BoundAudit& a, bool with_point) {
    Json j;
    j["id"] = a.id;
    j["statement"] = a.statement;
    j["lhs"] = a.lhs;
    j["rhs"] = a.rhs;
    if (a.satisfied) {
        j["satisfied"] = *a.satisfied;
    } else {
        j["ratio"] = a.ratio();
    }
    if (with_point) j["worst_point"] = to_json(a.worst_point);
    if (!a.note.empty()) j["note"] = a.note;
    return j;
}

Json to_json(const std::vector<BoundAudit>& audits, bool with_point) {
    Json arr = Json::array();
    for (const auto& a : audits) arr.push_back(to_json(a, with_point));
    return arr;
}

Json to_json(const DataNorms& d) {
    Json j;
    j["lambda1"] = d.lambda1;
    for (const auto& [k, v] : d.f_h) j["f_H" + std::to_string(k)] = v;
    j["f_H-1_surrogate"] = d.f_hm1;
    j["A_Linf"] = d.a_linf;
    j["A_W1inf"] = d.a_w1inf;
    j["D2A_L3"] = d.a_d2_l3;
    for (const auto& [k, v] : d.a_h) j["A_H" + std::to_string(k)] = v;
    return j;
}

Json to_json(const DiscreteNorms& d) {
    return Json{{"grad_v_L2", d.grad_v}, {"D2v_L2_broken", d.d2v}, {"p_L2_mod_R", d.p_l2}, {"grad_p_L2", d.grad_p}};
}

Json to_json(const FactorizationStats& s, double residual) {
    Json j;
    j["method"] = s.method;
    j["rows"] = s.rows;
    j["nonzeros"] = s.nonzeros;
    j["relative_residual"] = residual;
    if (s.method == "uzawa-cg") {
        j["outer_iterations"] = s.outer_iterations;
        j["inner_iterations"] = s.inner_iterations;
    } else {
        j["factor_nonzeros"] = s.factor_nonzeros;
        j["inertia"] = Json::array({s.positive, s.negative, 0});
        j["sign_det"] = s.sign_det;
        j["refinements"] = s.refinements;
    }
    return j;
}

Json to_json(const EllipticityReport& r) {
    Json j;
    j["alpha"] = r.alpha;
    j["positive"] = r.positive;
    j["minimizer"] = to_json(r.minimizer);
    j["minimizer_eigenvalue"] = r.minimizer_eigenvalue;
    j["eigenvalue_range"] = Json::array({r.min_eigenvalue, r.max_eigenvalue});
    j["margin"] = r.margin ? (std::isinf(*r.margin) ? Json("inf") : Json(*r.margin)) : Json();
    j["samples"] = r.samples;
    return j;
}

Json to_json(const ConvergenceTable& t) {
    Json rows = Json::array();
    for (const auto& r : t.rows) {
        Json j;
        j["n"] = r.n;
        j["h"] = r.h;
        j["velocity_dofs"] = r.nu;
        j["pressure_dofs"] = r.np;
        j["alpha"] = r.alpha;
        j["residual"] = r.residual;
        j["v_l2"] = r.errors.v_l2;
        j["v_h1"] = r.errors.v_h1;
        j["p_l2"] = r.errors.p_l2;
        j["rate_v_l2"] = opt(r.rate_v_l2);
        j["rate_v_h1"] = opt(r.rate_v_h1);
        j["rate_p_l2"] = opt(r.rate_p_l2);
        rows.push_back(j);
    }
    return Json{{"case", t.case_name},
                {"rows", rows},
                {"min_rates", {{"v_l2", opt(t.min_rate_v_l2())}, {"v_h1", opt(t.min_rate_v_h1())},
                               {"p_l2", opt(t.min_rate_p_l2())}}}};
}

Json to_json(const GuardResult& g) {
    return Json{{"id", g.id}, {"coarse_ratio", g.coarse}, {"fine_ratio", g.fine}, {"ok", g.ok}};
}

Json to_json(const PropertyResult& r) {
    return Json{{"criterion", r.criterion}, {"id", r.id},       {"description", r.description},
                {"passed", r.passed},       {"detail", r.detail}};
}

Json empty_report(const std::string& command) {
    Json j;
    j["command"] = command;
    j["alpha"] = nullptr;
    j["scenario"] = nullptr;
    j["bounds"] = Json::array();
    j["norms"] = Json::object();
    j["solver"] = nullptr;
    return j;
}

}  // namespace vestokes::cli
