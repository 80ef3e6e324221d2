#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dirac/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"exact and numeric analysis of presymplectic singularities"};
    app.require_subcommand(1);

    std::string scene_path;
    dirac::RunOptions opt;
    long probe_dirs = -1, probe_depth = -1;
    double tol_agree = -1, tol_conv = -1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("scene", scene_path, "scene file")->required();
        sub->add_flag("--machine-only", opt.machine_only, "print only the machine section");
        sub->add_option("--probe-dirs", probe_dirs, "number of probe directions");
        sub->add_option("--probe-depth", probe_depth, "number of probe radii per direction");
        sub->add_option("--tol-agree", tol_agree, "probe agreement tolerance");
        sub->add_option("--tol-conv", tol_conv, "probe convergence tolerance");
        return sub;
    };

    add_common(app.add_subcommand("check", "verify declared forms, bivectors and frames"));
    CLI::App* removable =
        add_common(app.add_subcommand("removable", "decide removability of the singularity"));
    removable->add_option("--mode", opt.mode, "exact | probe | auto")->default_val("auto");
    removable->add_option("--at", opt.at, "point name");
    CLI::App* frame =
        add_common(app.add_subcommand("frame", "extend the graph of the form across the singular set"));
    frame->add_option("--at", opt.at, "point name");
    add_common(app.add_subcommand("partial-inverse", "compute and verify the partial inverse"));
    CLI::App* split = add_common(
        app.add_subcommand("split-verify", "run the splitting criterion on the declared split"));
    split->add_option("--at", opt.at, "point name");
    CLI::App* table = add_common(
        app.add_subcommand("bracket-table", "brackets, anchors and 2-form of the frame"));
    table->add_option("--at", opt.at, "point name");
    add_common(app.add_subcommand("spinor", "pure spinor of the form and its normalization"));
    CLI::App* dwc =
        add_common(app.add_subcommand("dw-convert", "convert between block presentations"));
    dwc->add_option("--direction", opt.direction, "to-dw | from-dw")->default_val("to-dw");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    std::ifstream in(scene_path);
    if (!in) {
        std::cerr << "error: cannot open scene file '" << scene_path << "'\n";
        return 1;
    }
    std::stringstream buf;
    buf << in.rdbuf();

    try {
        dirac::Scene scene = dirac::parse_scene(buf.str());
        if (probe_dirs >= 0) scene.probe.directions = std::size_t(probe_dirs);
        if (probe_depth >= 0) scene.probe.depth = std::size_t(probe_depth);
        if (tol_agree >= 0) scene.probe.eps_agree = tol_agree;
        if (tol_conv >= 0) scene.probe.eps_conv = tol_conv;
        scene.probe.validate();
        dirac::Report rep =
            dirac::run_command(app.get_subcommands().front()->get_name(), scene, opt);
        std::cout << rep.render(opt.machine_only);
        return 0;
    } catch (const dirac::ParseError& e) {
        std::cerr << "error: " << scene_path << ": " << e.what() << "\n";
        return 1;
    } catch (const dirac::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}
