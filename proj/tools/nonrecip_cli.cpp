#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nonrecip/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"nonreciprocal lattice toolkit: gauge checks, spectra, GBZ and topology"};
    app.require_subcommand(1);

    nonrecip::ExperimentConfig config;
    std::vector<std::string> sets;

    const char* commands[] = {"spectrum",      "gbz",         "envelope", "zak",
                              "phase-diagram", "check-gauge", "hn2d",     "validate"};
    const char* help[] = {
        "diagonalize the model; spectrum.csv + phase.json",
        "trace the generalized Brillouin zone; gbz.csv + gbz_summary.json",
        "skin-mode decay-rate fits; envelopes.csv + fit.json",
        "NS Zak phase windings on the GBZ; zak.json",
        "edge-state counts over the (tL1 tR1, tL2 tR2)/t3^2 plane; phase_diagram.csv",
        "path-independence report for the hopping graph; gauge_report.json",
        "2D corner-skin analysis; density_map.csv + envelope2d.json",
        "parse and validate a model file"};
    for (int i = 0; i < 8; ++i) {
        CLI::App* sub = app.add_subcommand(commands[i], help[i]);
        sub->add_option("--model", config.model_path, "model JSON file")->required();
        sub->add_option("--out", config.output_dir, "output directory (default .)");
        sub->add_option("--set", sets, "override key=value (K, split_threshold, x_min, ...)");
        sub->callback([&config, name = std::string(commands[i])] { config.command = name; });
    }

    CLI11_PARSE(app, argc, argv);

    for (const std::string& kv : sets) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            std::fprintf(stderr, "bad --set argument (expected key=value): %s\n", kv.c_str());
            return 4;
        }
        config.overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    return nonrecip::run(config);
}
