#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>

#include "report.hpp"
#include "vestokes/errors.hpp"
#include "vestokes/vtk.hpp"

namespace vestokes::cli {

namespace {

void write_json(const std::filesystem::path& path, const Json& j) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write " + path.string());
    f << j.dump(2) << '\n';
}

std::string point(const Vec3& x) {
    std::ostringstream o;
    o << '(' << x[0] << ", " << x[1] << ", " << x[2] << ')';
    return o.str();
}

std::string value(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream o;
    o << std::setprecision(10) << v;
    return o.str();
}

Json mu_json(const RunConfig& c) {
    if (c.mu_const) return Json::array({c.mu_const->mu1, c.mu_const->mu2, c.mu_const->mu3});
    return Json::array({c.mu.mu1.describe(), c.mu.mu2.describe(), c.mu.mu3.describe()});
}

void print_bounds(std::ostream& out, const std::vector<BoundAudit>& audits) {
    for (const auto& a : audits) {
        out << "  " << std::left << std::setw(14) << a.id << std::right;
        if (a.satisfied) {
            out << value(a.lhs) << " <= " << value(a.rhs) << (*a.satisfied ? "  holds" : "  VIOLATED") << '\n';
        } else {
            out << "ratio " << value(a.ratio()) << '\n';
        }
    }
}

// Samples for alpha and the coefficient bounds: grid nodes for gridded B,
// cell centers otherwise, plus the solver's quadrature points when a mesh is
// given.
SampleSet coefficient_samples(const RunConfig& c) {
    SampleSet s;
    if (!c.b_nodes.empty()) {
        s.points = c.b_nodes;
        const double w = c.lengths[0] * c.lengths[1] * c.lengths[2] / double(s.points.size());
        s.weights.assign(s.points.size(), w);
    } else {
        s = SampleSet::cell_centers({c.samples, c.samples, c.samples}, c.lengths);
    }
    if (c.mesh_given) {
        const BoxMesh mesh = build_mesh(c.mesh[0], c.mesh[1], c.mesh[2], c.lengths[0], c.lengths[1], c.lengths[2]);
        const std::vector<Vec3> q = quadrature_points(mesh, c.quad_points);
        s.points.insert(s.points.end(), q.begin(), q.end());
        s.weights.insert(s.weights.end(), q.size(), 0.0);
    }
    return s;
}

void print_roots(std::ostream& out, const MuTriple& mu, Json& rep) {
    if (mu.mu2 != 0.0) {
        if (const auto r = roots(mu)) {
            out << "roots: lambda- = " << value(r->first) << ", lambda+ = " << value(r->second) << '\n';
            rep["roots"] = Json::array({r->first, r->second});
        } else {
            out << "roots: none (negative discriminant)\n";
            rep["roots"] = Json::array();
        }
    } else if (mu.mu1 != 0.0) {
        const double l0 = -mu.mu3 / mu.mu1;
        out << "root: lambda0 = -mu3/mu1 = " << value(l0) << '\n';
        rep["roots"] = Json::array({l0});
    } else {
        out << "roots: none (g is 1/lambda times a constant)\n";
        rep["roots"] = Json::array();
    }
}

}  // namespace

int cmd_ellipticity(const RunConfig& c, std::ostream& out, std::ostream& err) {
    if (!c.mu_given) throw ConfigError("ellipticity needs --mu");
    Json rep = empty_report("ellipticity");
    rep["mu"] = mu_json(c);
    auto finish = [&](int code) {
        if (c.json) write_json(c.output(*c.json), rep);
        return code;
    };

    if (c.mu_const) {
        const MuTriple mu = *c.mu_const;
        out << "mu = (" << value(mu.mu1) << ", " << value(mu.mu2) << ", " << value(mu.mu3) << ")\n";
        const Classification cl = classify(mu);
        rep["scenario"] = scenario_label(cl.scenario);
        if (!mu.thermodynamic()) {
            err << "mu1 + mu2 + mu3 = " << value(mu.sum()) << " <= 0: parameters are not thermodynamically admissible\n";
            return finish(kConfig);
        }
        out << "scenario: " << scenario_label(cl.scenario) << '\n';
        out << "Lambda: " << cl.lambda.str() << '\n';
        rep["lambda"] = to_json(cl.lambda);
        print_roots(out, mu, rep);
        if (c.epsilon) {
            try {
                const double d = max_identity_perturbation(mu, *c.epsilon);
                out << "delta(eps = " << value(*c.epsilon) << ") = " << value(d) << '\n';
                rep["delta"] = std::isinf(d) ? Json("inf") : Json(d);
            } catch (const NotAdmissible& e) {
                err << e.what() << '\n';
                return finish(kNotElliptic);
            }
        }
    } else {
        out << "mu varies in space; case classification needs constant parameters\n";
        if (c.epsilon) throw ConfigError("epsilon needs constant mu");
    }

    if (!c.b) return finish(kOk);
    const SampleSet samples = coefficient_samples(c);
    EllipticityReport r;
    try {
        r = alpha_field(c.mu, *c.b, samples.points);
    } catch (const NotSPD& e) {
        err << "B is not SPD: " << e.what() << '\n';
        return finish(kNotSPD);
    }
    out << "B: " << c.b_source << " (" << r.samples << " samples)\n";
    out << "alpha = " << value(r.alpha) << " at " << point(r.minimizer) << ", eigenvalue " << value(r.minimizer_eigenvalue)
        << '\n';
    out << "eigenvalues of B in [" << value(r.min_eigenvalue) << ", " << value(r.max_eigenvalue) << "]\n";
    if (r.margin) out << "margin to the boundary of Lambda: " << value(*r.margin) << '\n';
    rep["alpha"] = r.alpha;
    rep["ellipticity"] = to_json(r);
    try {
        const auto audits = audit_bounds(c.mu, *c.b, samples);
        out << "coefficient bounds:\n";
        print_bounds(out, audits);
        rep["bounds"] = to_json(audits, true);
    } catch (const NonDifferentiableField& e) {
        out << "coefficient bounds skipped: " << e.what() << '\n';
        rep["bounds_error"] = e.what();
    }
    if (!r.positive) {
        err << "not elliptic: alpha = " << value(r.alpha) << " <= 0 at " << point(r.minimizer) << '\n';
        return finish(kNotElliptic);
    }
    return finish(kOk);
}

int cmd_solve(const RunConfig& c, std::ostream& out, std::ostream& err) {
    Json rep = empty_report("solve");
    rep["mu"] = mu_json(c);
    auto finish = [&](int code) {
        write_json(c.output(c.json.value_or("solve.json")), rep);
        return code;
    };
    if (c.mu_const) rep["scenario"] = scenario_label(scenario_of(*c.mu_const));

    const TaylorHoodSpace space(build_mesh(c.mesh[0], c.mesh[1], c.mesh[2], c.lengths[0], c.lengths[1], c.lengths[2]));
    const TensorField b = c.b.value_or(TensorField());
    SaddleSystem sys;
    try {
        sys = assemble(space, c.mu, b, make_vector_fn(c.f), {c.quad_points, c.threads, c.load_quad_points});
    } catch (const NotElliptic& e) {
        err << "not elliptic: " << e.what() << '\n';
        return finish(kNotElliptic);
    } catch (const NotSPD& e) {
        err << "not elliptic: " << e.what() << '\n';
        return finish(kNotElliptic);
    } catch (const SingularTensor& e) {
        err << "not elliptic: " << e.what() << '\n';
        return finish(kNotElliptic);
    }
    rep["alpha"] = sys.coeff.alpha;
    out << "mesh " << c.mesh[0] << 'x' << c.mesh[1] << 'x' << c.mesh[2] << ", " << sys.nu() << " velocity + " << sys.np()
        << " pressure dofs\n";
    out << "alpha = " << value(sys.coeff.alpha) << " at " << point(sys.coeff.alpha_point) << ", |A|_inf = "
        << value(sys.coeff.a_norm) << '\n';

    SolveResult res;
    try {
        res = c.solver == "uzawa" ? uzawa_solve(sys, {c.tol}) : solve(sys, {c.tol});
    } catch (const Error& e) {
        err << "solver failure: " << e.what() << '\n';
        return finish(kSolverFailure);
    }
    rep["solver"] = to_json(res.stats, res.residual);
    out << "solver " << res.stats.method << ", relative residual " << value(res.residual) << '\n';

    const DataNorms data = data_norms(c.mu, b, c.f, c.lengths);
    const DiscreteNorms dn = discrete_norms(space, res.u, res.p);
    const auto audits = audit_estimates(dn, sys.coeff.alpha, data);
    out << "estimates:\n";
    print_bounds(out, audits);
    rep["bounds"] = to_json(audits);
    rep["norms"] = Json{{"data", to_json(data)}, {"solution", to_json(dn)}};
    rep["mesh"] = Json{{"divisions", c.mesh}, {"lengths", to_json(c.lengths)}, {"quad_points", c.quad_points},
                       {"load_quad_points", c.load_quad_points > 0 ? c.load_quad_points : c.quad_points}};

    const auto vtk = c.output(c.vtk.value_or("solve.vtk"));
    std::ofstream f(vtk);
    if (!f) throw ConfigError("cannot write " + vtk.string());
    write_vtk(f, space, res.u, res.p, cell_alpha(space, c.mu, b, c.quad_points));
    out << "wrote " << vtk.string() << '\n';
    return finish(*audits.front().satisfied ? kOk : kCheckFailed);
}

int cmd_mms(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const MMSCase mc = mms_case(c.mms_case);
    Json rep = empty_report("mms");
    rep["case"] = mc.name;
    const MuTriple mu{mc.mu[0].constant_value(), mc.mu[1].constant_value(), mc.mu[2].constant_value()};
    rep["scenario"] = scenario_label(scenario_of(mu));

    const std::array<ScalarField, 3> f = to_fields(mms_forcing(mc));
    const DataNorms data = data_norms(mc.mu_fields(), mc.b_field(), f, mc.lengths);
    const ExactSeminorms exact = exact_seminorms(mc);

    ConvergenceOptions o;
    o.quad_points = c.quad_points;
    o.load_quad_points = c.load_quad_points;
    o.error_quad_points = c.quad_points + 1;
    o.threads = c.threads;
    o.uzawa = c.solver == "uzawa";
    o.solve.tol = c.tol;
    o.uzawa_opts.tol = c.tol;

    std::vector<std::vector<BoundAudit>> levels;
    Json bounds = Json::array(), solvers = Json::array();
    bool bound_ok = true;
    ConvergenceTable table;
    try {
        table = run_convergence(mc, c.meshes, o, [&](const TaylorHoodSpace& space, const SaddleSystem& sys,
                                                      const SolveResult& res) {
            levels.push_back(audit_estimates(discrete_norms(space, res.u, res.p), sys.coeff.alpha, data, &exact));
            const int n = space.mesh().divisions[0];
            for (const auto& a : levels.back()) {
                Json j = to_json(a);
                j["n"] = n;
                bounds.push_back(j);
                if (a.satisfied && !*a.satisfied) bound_ok = false;
            }
            Json s = to_json(res.stats, res.residual);
            s["n"] = n;
            solvers.push_back(s);
        });
    } catch (const NotElliptic& e) {
        err << "not elliptic: " << e.what() << '\n';
        return kNotElliptic;
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        err << "solver failure: " << e.what() << '\n';
        return kSolverFailure;
    }

    Json guards = Json::array();
    bool guard_ok = true;
    for (std::size_t i = 1; i < levels.size(); ++i)
        for (GuardResult g : blow_up_guard(levels[i - 1], levels[i])) {
            g.id = std::to_string(c.meshes[i - 1]) + "->" + std::to_string(c.meshes[i]) + " " + g.id;
            guard_ok = guard_ok && g.ok;
            guards.push_back(to_json(g));
        }

    const RateThresholds t;
    rep["alpha"] = table.rows.empty() ? Json() : Json(table.rows.front().alpha);
    rep["bounds"] = bounds;
    rep["norms"] = Json{{"data", to_json(data)},
                        {"exact", {{"D3v_L2", exact.d3v}, {"D4v_L2", exact.d4v}, {"D2p_L2", exact.d2p}, {"D3p_L2", exact.d3p}}}};
    rep["solver"] = solvers;
    rep["convergence"] = to_json(table);
    rep["thresholds"] = Json{{"v_h1", t.v_h1},
                             {"v_l2", t.v_l2},
                             {"p_l2", t.p_l2},
                             {"label", "standard Taylor-Hood expectations for smooth solutions, not derived from the "
                                       "analysis"}};
    rep["guards"] = guards;
    rep["quadrature"] = Json{{"assembly", c.quad_points},
                             {"load", c.load_quad_points > 0 ? c.load_quad_points : c.quad_points},
                             {"errors", o.error_quad_points}};

    const auto csv_path = c.output(c.csv.value_or("mms_" + mc.name + ".csv"));
    {
        std::ofstream csv(csv_path);
        if (!csv) throw ConfigError("cannot write " + csv_path.string());
        table.write_csv(csv);
    }
    table.write_csv(out);
    write_json(c.output(c.json.value_or("mms_" + mc.name + ".json")), rep);

    const auto h1 = table.min_rate_v_h1(), l2 = table.min_rate_v_l2(), p = table.min_rate_p_l2();
    if (h1 && l2 && p) {
        out << "min rates: v_H1 " << value(*h1) << ", v_L2 " << value(*l2) << ", p_L2 " << value(*p)
            << " (thresholds " << t.v_h1 << ", " << t.v_l2 << ", " << t.p_l2
            << ": standard Taylor-Hood expectations)\n";
        if (*h1 < t.v_h1 || *l2 < t.v_l2 || *p < t.p_l2) {
            err << "rate below threshold: v_H1 " << value(*h1) << ", v_L2 " << value(*l2) << ", p_L2 " << value(*p)
                << '\n';
            return kRateFailure;
        }
    } else {
        out << "single mesh: no rates\n";
    }
    if (!bound_ok) {
        err << "a-priori velocity bound violated\n";
        return kCheckFailed;
    }
    if (!guard_ok) {
        err << "a ratio diagnostic grew by more than 10x under refinement\n";
        return kCheckFailed;
    }
    return kOk;
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream&) {
    SuiteOptions o;
    o.seed = c.seed;
    o.threads = c.threads;
    o.tol = c.tol;
    const auto results = run_property_suite(o);
    Json rep = empty_report("verify");
    rep["seed"] = c.seed;
    Json props = Json::array();
    int passed = 0;
    for (const auto& r : results) {
        out << (r.passed ? "PASS" : "FAIL") << "  [" << r.criterion << "] " << r.id << ": " << r.description << " | "
            << r.detail << '\n';
        props.push_back(to_json(r));
        passed += r.passed ? 1 : 0;
    }
    out << passed << '/' << results.size() << " properties passed (seed " << c.seed << ")\n";
    rep["properties"] = props;
    rep["passed"] = passed == static_cast<int>(results.size());
    write_json(c.output(c.json.value_or("verify.json")), rep);
    return passed == static_cast<int>(results.size()) ? kOk : kCheckFailed;
}

int run_command(const RunConfig& c, std::ostream& out, std::ostream& err) {
    try {
        if (c.command == "ellipticity") return cmd_ellipticity(c, out, err);
        if (c.command == "solve") return cmd_solve(c, out, err);
        if (c.command == "mms") return cmd_mms(c, out, err);
        if (c.command == "verify") return cmd_verify(c, out, err);
        throw ConfigError("unknown command '" + c.command + "'");
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kConfig;
    } catch (const NotSPD& e) {
        err << e.what() << '\n';
        return kNotSPD;
    } catch (const NotElliptic& e) {
        err << e.what() << '\n';
        return kNotElliptic;
    } catch (const Error& e) {
        err << "invalid input: " << e.what() << '\n';
        return kConfig;
    }
}

}  // namespace vestokes::cli
