#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "commands.hpp"
#include "vestokes/errors.hpp"

using namespace vestokes;

namespace {

const std::map<std::string, std::string> kHelp{
    {"mu", "mu1,mu2,mu3 as numbers or expressions in x,y,z"},
    {"b", "six expressions b11,b22,b33,b12,b13,b23"},
    {"b-field", "grid file with six components per node"},
    {"f", "three forcing expressions"},
    {"mesh", "cells per axis: n or nx,ny,nz"},
    {"lengths", "box lengths Lx,Ly,Lz"},
    {"quad-points", "points per direction of the tetrahedral rule (3 is exact to degree 5)"},
    {"load-quad-points", "points per direction for the load vector only (default: quad-points)"},
    {"samples", "cells per axis of the sample grid for expression fields"},
    {"epsilon", "margin for the identity perturbation radius"},
    {"solver", "direct or uzawa"},
    {"tol", "relative residual tolerance"},
    {"case", "classical, anisotropic or zero"},
    {"meshes", "doubling sequence of cells per axis, e.g. 2,4,8"},
    {"seed", "seed of the random property checks"},
    {"threads", "worker threads for assembly"},
    {"output-dir", "directory for reports (else $VESTOKES_OUTPUT_DIR, else .)"},
    {"json", "JSON report file"},
    {"vtk", "VTK output file"},
    {"csv", "convergence table file"},
};

const std::map<std::string, std::string> kCommands{
    {"ellipticity", "classify mu, compute alpha over a B field and check the coefficient bounds"},
    {"solve", "assemble and solve one problem; write VTK and a JSON report"},
    {"mms", "manufactured-solution convergence study"},
    {"verify", "run the seeded property suite"},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized Stokes problems with the coefficient A(B) = mu1 I + mu2 B + mu3 B^-1"};
    app.require_subcommand(1);
    struct Sub {
        CLI::App* app = nullptr;
        std::string config;
        std::map<std::string, std::string> flags;
    };
    std::map<std::string, Sub> subs;
    for (const auto& [name, help] : kCommands) {
        Sub& s = subs[name];
        s.app = app.add_subcommand(name, help);
        s.app->add_option("--config", s.config, "flat key = value file; flags override it");
        for (const auto& key : cli::allowed_keys(name)) s.app->add_option("--" + key, s.flags[key], kHelp.at(key));
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kConfig;
    }
    for (auto& [name, s] : subs) {
        if (!s.app->parsed()) continue;
        try {
            cli::KeyValues kv;
            if (!s.config.empty()) kv = cli::read_config_file(s.config);
            for (const auto& [key, value] : s.flags)
                if (s.app->count("--" + key) > 0) kv[key] = value;
            const cli::RunConfig c = cli::make_run_config(name, kv);
            return cli::run_command(c, std::cout, std::cerr);
        } catch (const Error& e) {
            std::cerr << "configuration error: " << e.what() << '\n';
            return cli::kConfig;
        }
    }
    return cli::kConfig;
}
