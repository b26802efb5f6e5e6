#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>

#include "vestokes/errors.hpp"
#include "vestokes/properties.hpp"

namespace vestokes::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string normalize_key(std::string k) {
    std::replace(k.begin(), k.end(), '_', '-');
    return k;
}

ScalarField scalar_spec(const std::string& text, const std::string& key) {
    try {
        const Expr e = Expr::parse(text);
        return e.is_constant() ? ScalarField::constant(e.constant_value()) : ScalarField::expression(e);
    } catch (const ParseError& err) {
        throw ConfigError(key + ": " + err.what());
    }
}

template <std::size_t N>
std::array<std::string, N> exactly(const std::string& text, const std::string& key) {
    const auto parts = split_list(text);
    if (parts.size() != N)
        throw ConfigError(key + ": expected " + std::to_string(N) + " comma-separated entries, got " +
                          std::to_string(parts.size()));
    std::array<std::string, N> out;
    std::copy(parts.begin(), parts.end(), out.begin());
    return out;
}

}  // namespace

KeyValues parse_config(std::istream& in, const std::string& origin) {
    KeyValues kv;
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(no) + ": expected 'key = value'");
        const std::string key = normalize_key(trim(line.substr(0, eq)));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(origin + ":" + std::to_string(no) + ": empty key");
        if (!kv.emplace(key, value).second)
            throw ConfigError(origin + ":" + std::to_string(no) + ": repeated key '" + key + "'");
    }
    return kv;
}

KeyValues read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    return parse_config(in, path.string());
}

const std::vector<std::string>& allowed_keys(const std::string& command) {
    static const std::map<std::string, std::vector<std::string>> keys{
        {"ellipticity",
         {"mu", "b", "b-field", "mesh", "lengths", "quad-points", "samples", "epsilon", "output-dir", "json", "seed",
          "threads"}},
        {"solve",
         {"mu", "b", "b-field", "f", "mesh", "lengths", "quad-points", "load-quad-points", "solver", "tol",
          "output-dir", "json", "vtk", "seed", "threads"}},
        {"mms",
         {"case", "meshes", "quad-points", "load-quad-points", "solver", "tol", "output-dir", "json", "csv", "seed",
          "threads"}},
        {"verify", {"tol", "output-dir", "json", "seed", "threads"}},
    };
    const auto it = keys.find(command);
    if (it == keys.end()) throw ConfigError("unknown command '" + command + "'");
    return it->second;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

double parse_number(const std::string& text, const std::string& key) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw ConfigError(key + ": '" + text + "' is not a number");
    return v;
}

int parse_int(const std::string& text, const std::string& key) {
    const std::string t = trim(text);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw ConfigError(key + ": '" + text + "' is not an integer");
    return v;
}

std::filesystem::path RunConfig::output(const std::filesystem::path& name) const {
    return name.is_absolute() ? name : output_dir / name;
}

RunConfig make_run_config(const std::string& command, const KeyValues& kv) {
    const auto& allowed = allowed_keys(command);
    for (const auto& [k, v] : kv)
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
            throw ConfigError("option '" + k + "' does not apply to '" + command + "'");
    auto get = [&](const std::string& k) -> std::optional<std::string> {
        const auto it = kv.find(k);
        if (it == kv.end()) return std::nullopt;
        return it->second;
    };

    RunConfig c;
    c.command = command;
    c.seed = kDefaultSeed;
    if (auto v = get("seed")) {
        const std::string t = trim(*v);
        std::uint64_t s = 0;
        const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), s);
        if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
            throw ConfigError("seed: '" + *v + "' is not a nonnegative integer");
        c.seed = s;
    }
    if (auto v = get("threads")) {
        c.threads = parse_int(*v, "threads");
        if (c.threads < 1) throw ConfigError("threads must be >= 1");
    }
    if (auto v = get("tol")) {
        c.tol = parse_number(*v, "tol");
        if (!(c.tol > 0.0)) throw ConfigError("tol must be strictly positive");
    }
    if (auto v = get("quad-points")) {
        c.quad_points = parse_int(*v, "quad-points");
        if (c.quad_points < 1 || c.quad_points > 10) throw ConfigError("quad-points must be in 1..10");
    }
    if (auto v = get("load-quad-points")) {
        c.load_quad_points = parse_int(*v, "load-quad-points");
        if (c.load_quad_points < 1 || c.load_quad_points > 10) throw ConfigError("load-quad-points must be in 1..10");
    }
    if (auto v = get("samples")) {
        c.samples = parse_int(*v, "samples");
        if (c.samples < 1) throw ConfigError("samples must be >= 1");
    }
    if (auto v = get("epsilon")) {
        c.epsilon = parse_number(*v, "epsilon");
        if (*c.epsilon < 0.0) throw ConfigError("epsilon must be >= 0");
    }
    if (auto v = get("solver")) {
        c.solver = trim(*v);
        if (c.solver != "direct" && c.solver != "uzawa") throw ConfigError("solver must be 'direct' or 'uzawa'");
    }
    if (auto v = get("lengths")) {
        const auto l = exactly<3>(*v, "lengths");
        for (int a = 0; a < 3; ++a) {
            c.lengths[a] = parse_number(l[a], "lengths");
            if (!(c.lengths[a] > 0.0)) throw ConfigError("lengths must be positive");
        }
    }
    if (auto v = get("mesh")) {
        const auto parts = split_list(*v);
        if (parts.size() == 1) {
            c.mesh.fill(parse_int(parts[0], "mesh"));
        } else if (parts.size() == 3) {
            for (int a = 0; a < 3; ++a) c.mesh[a] = parse_int(parts[a], "mesh");
        } else {
            throw ConfigError("mesh: expected n or nx,ny,nz");
        }
        for (int n : c.mesh)
            if (n < 1) throw ConfigError("mesh divisions must be >= 1");
        c.mesh_given = true;
    }
    if (auto v = get("mu")) {
        const auto m = exactly<3>(*v, "mu");
        c.mu = {scalar_spec(m[0], "mu"), scalar_spec(m[1], "mu"), scalar_spec(m[2], "mu")};
        c.mu_given = true;
        c.mu_const.reset();
        if (c.mu.is_constant())
            c.mu_const = MuTriple{c.mu.mu1.constant_value(), c.mu.mu2.constant_value(), c.mu.mu3.constant_value()};
    }
    if (get("b") && get("b-field")) throw ConfigError("give either b or b-field, not both");
    if (auto v = get("b")) {
        const auto t = exactly<6>(*v, "b");
        std::array<ScalarField, 6> comps;
        for (int k = 0; k < 6; ++k) comps[k] = scalar_spec(t[k], "b");
        c.b = TensorField(comps);
        c.b_source = trim(*v);
    }
    if (auto v = get("b-field")) {
        const std::filesystem::path p = trim(*v);
        if (!std::filesystem::is_regular_file(p)) throw ConfigError("b-field: file not found: " + p.string());
        try {
            const GridFile g = read_grid_file(p);
            c.b = tensor_field_from_grid_file(g);
            GridData d;
            d.nodes = g.nodes;
            d.lengths = g.lengths;
            for (int i = 0; i < g.nodes[0]; ++i)
                for (int j = 0; j < g.nodes[1]; ++j)
                    for (int k = 0; k < g.nodes[2]; ++k) c.b_nodes.push_back(d.position(i, j, k));
            if (!get("lengths")) c.lengths = g.lengths;
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            throw ConfigError("b-field: " + std::string(e.what()));
        }
        c.b_source = p.string();
    }
    if (auto v = get("f")) {
        const auto t = exactly<3>(*v, "f");
        for (int k = 0; k < 3; ++k) c.f[k] = scalar_spec(t[k], "f");
        c.f_source = trim(*v);
    }
    if (auto v = get("case")) c.mms_case = trim(*v);
    if (command == "mms") {
        const auto names = mms_case_names();
        if (std::find(names.begin(), names.end(), c.mms_case) == names.end())
            throw ConfigError("case: unknown MMS case '" + c.mms_case + "'");
    }
    if (auto v = get("meshes")) {
        c.meshes.clear();
        for (const auto& s : split_list(*v)) c.meshes.push_back(parse_int(s, "meshes"));
        for (std::size_t i = 0; i < c.meshes.size(); ++i) {
            if (c.meshes[i] < 1) throw ConfigError("meshes must be >= 1");
            if (i > 0 && c.meshes[i] != 2 * c.meshes[i - 1]) throw ConfigError("meshes must double at each step");
        }
    }

    if (auto v = get("output-dir")) {
        c.output_dir = trim(*v);
    } else if (const char* env = std::getenv(kOutputDirEnv); env && *env) {
        c.output_dir = env;
    }
    if (auto v = get("json")) c.json = trim(*v);
    if (auto v = get("vtk")) c.vtk = trim(*v);
    if (auto v = get("csv")) c.csv = trim(*v);
    std::error_code ec;
    std::filesystem::create_directories(c.output_dir, ec);
    if (ec || !std::filesystem::is_directory(c.output_dir))
        throw ConfigError("output-dir: cannot create " + c.output_dir.string());
    for (const auto& p : {c.json, c.vtk, c.csv})
        if (p) {
            const auto parent = c.output(*p).parent_path();
            if (!parent.empty() && !std::filesystem::is_directory(parent))
                throw ConfigError("output path directory does not exist: " + parent.string());
        }
    return c;
}

}  // namespace vestokes::cli
