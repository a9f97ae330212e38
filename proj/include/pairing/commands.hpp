#pragma once

// Command implementations behind the CLI subcommands. Kept as a library so
// the binary stays a thin argument-parsing shell and the whole pipeline can
// be driven in-process.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pairing/datagen.hpp"
#include "pairing/domain.hpp"
#include "pairing/models.hpp"

namespace pairing::cli {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitCheck = 4;

struct ExperimentConfig {
    std::string out_dir = "out";
    std::string dataset_dir; // defaults to <out_dir>/dataset
    datagen::GenConfig gen;
    models::TrainConfig train;
    std::vector<std::string> model_names = {"rules", "lr", "dt", "rf", "gbt", "mlp"};
    TimingParams timing{45.0, 180.0, 5.0};
    int n_runs = 20;
    std::string format = "table"; // json, csv, table, svg
    std::vector<std::string> policies = {"traditional", "rules", "mlp"};
    bool stochastic = false;
    double jitter = 0.25;

    std::string dataset_path() const { return dataset_dir.empty() ? out_dir + "/dataset" : dataset_dir; }
    void validate() const; // ConfigError on violation
};

ExperimentConfig config_from_file(const std::string& path);
std::string config_to_json_string(const ExperimentConfig& cfg);

ConfusionCounts parse_counts(const std::string& csv); // "TN,FP,FN,TP"
TimingParams parse_timing(const std::string& csv);    // "T1,T2,TPRED"

// generate: datasets + schema under dataset_path(), split summary to out.
int cmd_generate(const ExperimentConfig& cfg, std::ostream& out);

// train-eval: trains the roster, repeats n_runs on validation, compares the
// best learner against the rule baseline on test, saves models and reports.
int cmd_train_eval(const ExperimentConfig& cfg, std::ostream& out);

struct AnalyzeRequest {
    ConfusionCounts counts_a;
    std::string name_a = "policy_a";
    std::optional<ConfusionCounts> counts_b;
    std::string name_b = "policy_b";
    // Re-derives the pairwise comparison with this bypass count substituted
    // for policy A's true positives, keeping its prediction-stage count.
    std::optional<std::uint64_t> alt_bypass_a;
    TimingParams timing{45.0, 180.0, 5.0};
    std::string format = "table";
    std::string out_dir; // when set, writes analysis.json (and .svg for svg format)
};

// analyze: three-scenario total-time table, break-even conditions, savings.
int cmd_analyze(const AnalyzeRequest& req, std::ostream& out);

// simulate: runs each configured policy over the test split, cross-checks
// deterministic totals against the closed forms (hard error on mismatch).
int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out);

// report: re-renders a JSON report (metrics/analysis/simulation) as
// table, csv, or svg.
int cmd_report(const std::string& input_path, const std::string& format,
               const std::string& out_dir, std::ostream& out);

} // namespace pairing::cli
