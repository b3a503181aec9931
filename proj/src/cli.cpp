#include "tsnoether/cli.hpp"

#include "tsnoether/config.hpp"
#include "tsnoether/errors.hpp"
#include "tsnoether/runner.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <optional>
#include <string>

namespace tsn {

namespace {

struct CliFlags {
    std::string config_path;
    std::string out_dir;
    std::string variant;
    double tol = 0.0;
    bool allow_noninvariant = false;
};

void add_overrides(CLI::App* sub, CliFlags* flags) {
    sub->add_option("--tol", flags->tol, "Newton tolerance override")
        ->check(CLI::PositiveNumber);
    sub->add_option("--variant", flags->variant, "Euler-Lagrange variant override")
        ->check(CLI::IsMember({"nonshifted", "shifted", "both"}));
    sub->add_flag("--allow-noninvariant", flags->allow_noninvariant,
                  "Continue past failed admissibility or invariance checks");
    sub->add_option("--out", flags->out_dir, "Output directory override");
}

VariantChoice variant_from_name(const std::string& name) {
    if (name == "nonshifted") return VariantChoice::NonShifted;
    if (name == "shifted") return VariantChoice::Shifted;
    return VariantChoice::Both;
}

RunOptions options_from(const CLI::App* sub, const CliFlags& flags, bool check_only) {
    RunOptions opts;
    if (sub->count("--tol") > 0) opts.tol = flags.tol;
    if (sub->count("--variant") > 0) opts.variant = variant_from_name(flags.variant);
    if (sub->count("--out") > 0) opts.out_dir = flags.out_dir;
    opts.allow_noninvariant = flags.allow_noninvariant;
    opts.check_only = check_only;
    return opts;
}

int dispatch(const ExperimentSpec& spec, const RunOptions& opts) {
    const RunReport report = run_experiment(spec, opts);
    std::cout << report.text;
    return report.exit_code;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Euler-Lagrange solver and conservation-law checker on finite time scales"};
    app.require_subcommand(1);

    CliFlags flags;

    CLI::App* run = app.add_subcommand("run", "Solve a configured experiment and write its reports");
    run->add_option("config", flags.config_path, "Experiment config file")->required();
    add_overrides(run, &flags);

    CLI::App* bt = app.add_subcommand("bt-example",
                                      "Run the built-in scale-symmetry example on a dense uniform grid");
    add_overrides(bt, &flags);

    CLI::App* check = app.add_subcommand("check",
                                         "Run only the admissibility and invariance checks for a config");
    check->add_option("config", flags.config_path, "Experiment config file")->required();
    check->add_flag("--allow-noninvariant", flags.allow_noninvariant,
                    "Report failures without a failing exit code");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        // Usage and option errors collapse to a single code; --help stays 0.
        return code == 0 ? 0 : 1;
    }

    try {
        if (run->parsed()) {
            return dispatch(parse_config(flags.config_path), options_from(run, flags, false));
        }
        if (bt->parsed()) {
            return dispatch(bt_example_spec(), options_from(bt, flags, false));
        }
        if (check->parsed()) {
            RunOptions opts;
            opts.allow_noninvariant = flags.allow_noninvariant;
            opts.check_only = true;
            return dispatch(parse_config(flags.config_path), opts);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

} // namespace tsn
