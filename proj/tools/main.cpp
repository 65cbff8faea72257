#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "rsf/errors.hpp"

namespace {

struct Common {
    std::string config;
    rsf::cli::Overrides ov;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("-c,--config", c.config, "TOML run configuration");
    sub->add_option("--v-inf", c.ov.v_inf, "shear velocity at the boundary");
    sub->add_option("--kappa", c.ov.kappa, "aging diffusion coefficient");
    sub->add_option("--n", c.ov.N, "grid nodes including boundaries (odd)");
    sub->add_option("--tau", c.ov.tau, "time step");
    sub->add_option("--out", c.ov.out, "output directory");
}

rsf::cli::RunConfig resolve(const Common& c) {
    rsf::cli::RunConfig cfg = c.config.empty() ? rsf::cli::RunConfig{} : rsf::cli::load_config(c.config);
    rsf::cli::apply_overrides(cfg, c.ov);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bulk rate-and-state fault shear: steady states, limits, evolution and slider"};
    app.require_subcommand(1);

    Common common;
    for (const auto& name : rsf::cli::command_names()) add_common(app.add_subcommand(name, "run " + name), common);
    auto* repro = app.add_subcommand("repro", "run a figure preset (fig3 ... fig9)");
    std::string preset;
    repro->add_option("preset", preset, "preset name")->required();
    add_common(repro, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return rsf::cli::exit_config;
    }

    CLI::App* chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();
    return rsf::cli::run_guarded([&]() {
        const rsf::cli::RunConfig cfg = resolve(common);
        if (name == "repro") return rsf::cli::cmd_repro(preset, cfg);
        return rsf::cli::dispatch(name, cfg);
    });
}
