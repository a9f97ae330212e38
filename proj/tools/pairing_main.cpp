// Command-line surface for the call-routing toolkit:
//   pairing generate | train-eval | analyze | simulate | report

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pairing/commands.hpp"
#include "pairing/errors.hpp"

using namespace pairing;

namespace {

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<double> scale;
    std::optional<int> n_runs;
    std::optional<std::string> timing;
    std::optional<std::string> format;
    std::optional<std::string> out_dir;
    std::optional<std::string> dataset_dir;
    std::optional<double> signal;
    std::optional<std::vector<std::string>> models;
    std::optional<std::vector<std::string>> policies;
    bool stochastic = false;
    std::optional<double> jitter;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "Experiment config JSON file");
    cmd->add_option("--seed", flags.seed, "Base seed for generation and training");
    cmd->add_option("--scale", flags.scale, "Scale factor on the generated customer count");
    cmd->add_option("--n-runs", flags.n_runs, "Number of repeated training runs");
    cmd->add_option("--timing", flags.timing, "Stage durations as T_STAGE1,T_STAGE2,T_PRED");
    cmd->add_option("--format", flags.format, "Report format: json, csv, table, svg");
    cmd->add_option("--out", flags.out_dir, "Output directory");
    cmd->add_option("--dataset-dir", flags.dataset_dir, "Dataset directory");
    cmd->add_option("--signal", flags.signal, "Label signal strength for generation");
    cmd->add_option("--models", flags.models, "Models to train (rules,lr,dt,rf,gbt,mlp)")
        ->delimiter(',');
    cmd->add_option("--policies", flags.policies, "Policies to simulate")->delimiter(',');
    cmd->add_flag("--stochastic", flags.stochastic, "Draw per-call stage durations");
    cmd->add_option("--jitter", flags.jitter, "Coefficient of variation in stochastic mode");
}

cli::ExperimentConfig resolve_config(const CommonFlags& flags) {
    cli::ExperimentConfig cfg;
    if (!flags.config_path.empty()) cfg = cli::config_from_file(flags.config_path);
    // Flags win over the config file.
    if (flags.seed) {
        cfg.gen.seed = *flags.seed;
        cfg.train.seed = *flags.seed;
    }
    if (flags.scale) cfg.gen = cfg.gen.scaled(*flags.scale);
    if (flags.n_runs) cfg.n_runs = *flags.n_runs;
    if (flags.timing) cfg.timing = cli::parse_timing(*flags.timing);
    if (flags.format) cfg.format = *flags.format;
    if (flags.out_dir) cfg.out_dir = *flags.out_dir;
    if (flags.dataset_dir) cfg.dataset_dir = *flags.dataset_dir;
    if (flags.signal) cfg.gen.label_signal_strength = *flags.signal;
    if (flags.models) cfg.model_names = *flags.models;
    if (flags.policies) cfg.policies = *flags.policies;
    if (flags.stochastic) cfg.stochastic = true;
    if (flags.jitter) cfg.jitter = *flags.jitter;
    cfg.validate();
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Call-center routing toolkit: synthetic data, classifier roster, "
                 "time-model analysis, and IVR flow simulation"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string counts_a, counts_b;
    std::optional<std::uint64_t> alt_tp;
    std::string report_input;

    auto* generate = app.add_subcommand("generate", "Generate synthetic datasets");
    add_common_flags(generate, flags);

    auto* train_eval = app.add_subcommand("train-eval", "Train the roster and report metrics");
    add_common_flags(train_eval, flags);

    auto* analyze = app.add_subcommand("analyze", "Break-even and savings analysis");
    add_common_flags(analyze, flags);
    analyze->add_option("--counts", counts_a, "Confusion counts as TN,FP,FN,TP")->required();
    analyze->add_option("--counts-b", counts_b, "Second policy's counts as TN,FP,FN,TP");
    analyze->add_option("--alt-tp", alt_tp,
                        "Alternate stage-1 bypass count substituted for the first policy");

    auto* simulate = app.add_subcommand("simulate", "Simulate policies over the test split");
    add_common_flags(simulate, flags);

    auto* report = app.add_subcommand("report", "Re-render a JSON report");
    add_common_flags(report, flags);
    report->add_option("input", report_input, "Report JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) return cli::cmd_generate(resolve_config(flags), std::cout);
        if (train_eval->parsed()) return cli::cmd_train_eval(resolve_config(flags), std::cout);
        if (analyze->parsed()) {
            cli::AnalyzeRequest req;
            req.counts_a = cli::parse_counts(counts_a);
            req.name_a = counts_b.empty() ? "predicted" : "rules";
            if (!counts_b.empty()) {
                req.counts_b = cli::parse_counts(counts_b);
                req.name_b = "model";
            }
            req.alt_bypass_a = alt_tp;
            if (flags.timing) req.timing = cli::parse_timing(*flags.timing);
            if (flags.format) req.format = *flags.format;
            if (flags.out_dir) req.out_dir = *flags.out_dir;
            return cli::cmd_analyze(req, std::cout);
        }
        if (simulate->parsed()) return cli::cmd_simulate(resolve_config(flags), std::cout);
        if (report->parsed())
            return cli::cmd_report(report_input, flags.format.value_or("table"),
                                   flags.out_dir.value_or(""), std::cout);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return cli::kExitConfig;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return cli::kExitData;
    } catch (const CheckError& e) {
        std::cerr << "cross-check failure: " << e.what() << "\n";
        return cli::kExitCheck;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
