#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include <cwl/commands.hpp>

int main(int argc, char** argv) {
    CLI::App app{
        "Numerical laboratory for coupled second-order systems with delayed "
        "pointwise damping"};
    app.require_subcommand(1);

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"validate",
         "Structural checks and coupling-bound estimate for a quadruple or model"},
        {"simulate",
         "Integrate the delayed closed loop and emit the energy trace CSV"},
        {"decay", "Simulate and fit the exponential decay rate over a window"},
        {"transfer",
         "Evaluate transfer functions on a lambda grid or a vertical-line scan"},
        {"observability", "Ingham-ratio batches and modal-coefficient infimum"},
        {"criterion", "Rational-point stability criterion for the control point"},
        {"conjugacy",
         "Conjugation residuals and transfer-form agreement on random quadruples"},
    };

    std::string config_path;
    std::string out_dir = ".";
    for (const auto& [name, description] : commands) {
        CLI::App* sub = app.add_subcommand(name, description);
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--out", out_dir, "Output directory (default: .)");
    }
    CLI11_PARSE(app, argc, argv);

    return cwl::run_command(app.get_subcommands().front()->get_name(),
                            config_path, out_dir);
}
