#include "pairing/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>

#include <json.hpp>

#include "pairing/report.hpp"
#include "pairing/rng.hpp"
#include "pairing/rules.hpp"
#include "pairing/simulator.hpp"
#include "pairing/textio.hpp"
#include "pairing/timing.hpp"

namespace pairing::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json metrics_to_json(const MetricsReport& r) {
    return {{"precision", r.precision}, {"recall", r.recall}, {"specificity", r.specificity},
            {"f1", r.f1},               {"gm", r.gm},         {"f1_gm", r.f1_gm}};
}

json cm_to_json(const ConfusionCounts& cm) {
    return {{"tn", cm.tn}, {"fp", cm.fp}, {"fn", cm.fn}, {"tp", cm.tp}};
}

json totals_to_json(const timing::TimeTotals& t) {
    return {{"total_seconds", t.total_seconds},
            {"n_calls", t.n_calls},
            {"pred_seconds", t.pred_seconds},
            {"stage1_seconds", t.stage1_seconds},
            {"stage2_seconds", t.stage2_seconds}};
}

json timing_to_json(const TimingParams& p) {
    return {{"t_stage1", p.t_stage1}, {"t_stage2", p.t_stage2}, {"t_pred", p.t_pred}};
}

json gen_to_json(const datagen::GenConfig& g) {
    return {{"n_customers", g.n_customers},
            {"train_months", g.train_months},
            {"validation_months", g.validation_months},
            {"test_months", g.test_months},
            {"positive_rate", g.positive_rate},
            {"calls_per_customer_mean", g.calls_per_customer_mean},
            {"seed", g.seed},
            {"label_signal_strength", g.label_signal_strength},
            {"start", format_iso8601(g.start)}};
}

std::string mean_std_cell(double mean, double stddev) {
    return report::percent2(mean) + " +/- " + report::percent2(stddev);
}

const char* direction_text(timing::BreakEvenReport::Direction d) {
    return d == timing::BreakEvenReport::Direction::greater_than ? ">" : "<";
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec && !fs::exists(dir)) throw DataError("cannot create directory " + dir);
}

} // namespace

void ExperimentConfig::validate() const {
    gen.validate();
    train.validate();
    if (model_names.empty()) throw ConfigError("at least one model must be configured");
    for (const auto& name : model_names) models::kind_from_name(name);
    if (policies.empty()) throw ConfigError("at least one policy must be configured");
    if (n_runs < 1) throw ConfigError("n_runs must be positive");
    if (format != "json" && format != "csv" && format != "table" && format != "svg")
        throw ConfigError("unknown report format: " + format);
    if (jitter < 0.0) throw ConfigError("jitter must be non-negative");
}

std::string config_to_json_string(const ExperimentConfig& cfg) {
    json j;
    j["out_dir"] = cfg.out_dir;
    j["dataset_dir"] = cfg.dataset_path();
    j["gen"] = gen_to_json(cfg.gen);
    j["train"] = {{"seed", cfg.train.seed},
                  {"threshold", cfg.train.threshold},
                  {"rules_text", cfg.train.rules_text},
                  {"lr",
                   {{"learning_rate", cfg.train.lr.learning_rate},
                    {"epochs", cfg.train.lr.epochs},
                    {"l2", cfg.train.lr.l2}}},
                  {"dt",
                   {{"max_depth", cfg.train.dt.max_depth},
                    {"min_samples_leaf", cfg.train.dt.min_samples_leaf}}},
                  {"rf",
                   {{"n_trees", cfg.train.rf.n_trees},
                    {"feature_fraction", cfg.train.rf.feature_fraction},
                    {"bootstrap", cfg.train.rf.bootstrap}}},
                  {"gbt",
                   {{"n_rounds", cfg.train.gbt.n_rounds},
                    {"shrinkage", cfg.train.gbt.shrinkage},
                    {"max_depth", cfg.train.gbt.max_depth}}},
                  {"mlp",
                   {{"hidden_sizes", cfg.train.mlp.hidden_sizes},
                    {"learning_rate", cfg.train.mlp.learning_rate},
                    {"epochs", cfg.train.mlp.epochs},
                    {"batch_size", cfg.train.mlp.batch_size}}}};
    j["models"] = cfg.model_names;
    j["timing"] = timing_to_json(cfg.timing);
    j["n_runs"] = cfg.n_runs;
    j["format"] = cfg.format;
    j["policies"] = cfg.policies;
    j["stochastic"] = cfg.stochastic;
    j["jitter"] = cfg.jitter;
    return j.dump(2) + "\n";
}

ExperimentConfig config_from_file(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const DataError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path + " is not valid JSON: " + e.what());
    }

    ExperimentConfig cfg;
    try {
        if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
        if (j.contains("dataset_dir")) cfg.dataset_dir = j["dataset_dir"].get<std::string>();
        if (j.contains("gen")) {
            const json& g = j["gen"];
            auto& c = cfg.gen;
            if (g.contains("n_customers")) c.n_customers = g["n_customers"].get<std::uint64_t>();
            if (g.contains("train_months")) c.train_months = g["train_months"].get<int>();
            if (g.contains("validation_months"))
                c.validation_months = g["validation_months"].get<int>();
            if (g.contains("test_months")) c.test_months = g["test_months"].get<int>();
            if (g.contains("positive_rate")) c.positive_rate = g["positive_rate"].get<double>();
            if (g.contains("calls_per_customer_mean"))
                c.calls_per_customer_mean = g["calls_per_customer_mean"].get<double>();
            if (g.contains("seed")) c.seed = g["seed"].get<std::uint64_t>();
            if (g.contains("label_signal_strength"))
                c.label_signal_strength = g["label_signal_strength"].get<double>();
            if (g.contains("start")) c.start = parse_iso8601(g["start"].get<std::string>());
        }
        if (j.contains("train")) {
            const json& t = j["train"];
            auto& c = cfg.train;
            if (t.contains("seed")) c.seed = t["seed"].get<std::uint64_t>();
            if (t.contains("threshold")) c.threshold = t["threshold"].get<double>();
            if (t.contains("rules_text")) c.rules_text = t["rules_text"].get<std::string>();
            if (t.contains("lr")) {
                const json& m = t["lr"];
                if (m.contains("learning_rate")) c.lr.learning_rate = m["learning_rate"].get<double>();
                if (m.contains("epochs")) c.lr.epochs = m["epochs"].get<int>();
                if (m.contains("l2")) c.lr.l2 = m["l2"].get<double>();
            }
            if (t.contains("dt")) {
                const json& m = t["dt"];
                if (m.contains("max_depth")) c.dt.max_depth = m["max_depth"].get<int>();
                if (m.contains("min_samples_leaf"))
                    c.dt.min_samples_leaf = m["min_samples_leaf"].get<int>();
            }
            if (t.contains("rf")) {
                const json& m = t["rf"];
                if (m.contains("n_trees")) c.rf.n_trees = m["n_trees"].get<int>();
                if (m.contains("feature_fraction"))
                    c.rf.feature_fraction = m["feature_fraction"].get<double>();
                if (m.contains("bootstrap")) c.rf.bootstrap = m["bootstrap"].get<bool>();
            }
            if (t.contains("gbt")) {
                const json& m = t["gbt"];
                if (m.contains("n_rounds")) c.gbt.n_rounds = m["n_rounds"].get<int>();
                if (m.contains("shrinkage")) c.gbt.shrinkage = m["shrinkage"].get<double>();
                if (m.contains("max_depth")) c.gbt.max_depth = m["max_depth"].get<int>();
            }
            if (t.contains("mlp")) {
                const json& m = t["mlp"];
                if (m.contains("hidden_sizes"))
                    c.mlp.hidden_sizes = m["hidden_sizes"].get<std::vector<int>>();
                if (m.contains("learning_rate"))
                    c.mlp.learning_rate = m["learning_rate"].get<double>();
                if (m.contains("epochs")) c.mlp.epochs = m["epochs"].get<int>();
                if (m.contains("batch_size")) c.mlp.batch_size = m["batch_size"].get<int>();
            }
        }
        if (j.contains("models")) cfg.model_names = j["models"].get<std::vector<std::string>>();
        if (j.contains("timing")) {
            const json& t = j["timing"];
            cfg.timing = TimingParams(t.at("t_stage1").get<double>(),
                                      t.at("t_stage2").get<double>(),
                                      t.at("t_pred").get<double>());
        }
        if (j.contains("n_runs")) cfg.n_runs = j["n_runs"].get<int>();
        if (j.contains("format")) cfg.format = j["format"].get<std::string>();
        if (j.contains("policies")) cfg.policies = j["policies"].get<std::vector<std::string>>();
        if (j.contains("stochastic")) cfg.stochastic = j["stochastic"].get<bool>();
        if (j.contains("jitter")) cfg.jitter = j["jitter"].get<double>();
    } catch (const json::exception& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
    cfg.validate();
    return cfg;
}

ConfusionCounts parse_counts(const std::string& csv) {
    const auto parts = split_text(csv, ',');
    if (parts.size() != 4) throw ConfigError("counts must be TN,FP,FN,TP");
    std::uint64_t v[4];
    for (int i = 0; i < 4; ++i) {
        try {
            v[i] = std::stoull(parts[i]);
        } catch (const std::exception&) {
            throw ConfigError("malformed count '" + parts[i] + "'");
        }
    }
    return ConfusionCounts{v[0], v[1], v[2], v[3]};
}

TimingParams parse_timing(const std::string& csv) {
    const auto parts = split_text(csv, ',');
    if (parts.size() != 3) throw ConfigError("timing must be T_STAGE1,T_STAGE2,T_PRED");
    try {
        return TimingParams(parse_double(parts[0]), parse_double(parts[1]),
                            parse_double(parts[2]));
    } catch (const DataError& e) {
        throw ConfigError(std::string("malformed timing: ") + e.what());
    }
}

int cmd_generate(const ExperimentConfig& cfg, std::ostream& out) {
    cfg.validate();
    const std::string dir = cfg.dataset_path();
    ensure_dir(dir);

    const auto bundle = datagen::generate_datasets(cfg.gen);
    datagen::write_dataset_csv(dir + "/train.csv", bundle.train);
    datagen::write_dataset_csv(dir + "/validation.csv", bundle.validation);
    datagen::write_dataset_csv(dir + "/test.csv", bundle.test);
    datagen::write_schema_json(dir + "/schema.json", cfg.gen);

    report::Table table;
    table.title = "Dataset summary";
    table.headers = {"Split", "Duration (months)", "Unique callers", "SERVICE_A calls",
                     "Other calls", "Total calls"};
    json summary;
    const datagen::LabeledDataset* splits[] = {&bundle.train, &bundle.validation, &bundle.test};
    const int months[] = {cfg.gen.train_months, cfg.gen.validation_months, cfg.gen.test_months};
    for (int i = 0; i < 3; ++i) {
        const auto& ds = *splits[i];
        std::set<std::uint64_t> callers;
        std::uint64_t positives = 0;
        for (const auto& rec : ds.records) {
            callers.insert(rec.caller_id);
            if (rec.true_label.positive()) ++positives;
        }
        const std::uint64_t total = ds.records.size();
        table.rows.push_back({datagen::split_name(ds.split_tag), std::to_string(months[i]),
                              std::to_string(callers.size()), std::to_string(positives),
                              std::to_string(total - positives), std::to_string(total)});
        summary[datagen::split_name(ds.split_tag)] = {{"months", months[i]},
                                                      {"unique_callers", callers.size()},
                                                      {"service_a_calls", positives},
                                                      {"other_calls", total - positives},
                                                      {"total_calls", total}};
    }
    summary["config"] = gen_to_json(cfg.gen);
    write_file_atomic(dir + "/summary.json", summary.dump(2) + "\n");

    if (cfg.format == "json")
        out << summary.dump(2) << "\n";
    else if (cfg.format == "csv")
        out << table.to_csv();
    else
        out << table.render();
    return kExitOk;
}

namespace {

struct RosterEntry {
    std::string name;
    models::ModelKind kind;
    bool ok = false;
    std::string error;
    models::RepeatStats validation;
    std::unique_ptr<models::Classifier> model; // trained with the run-0 seed
};

} // namespace

int cmd_train_eval(const ExperimentConfig& cfg, std::ostream& out) {
    cfg.validate();
    const std::string dir = cfg.dataset_path();
    const auto train = datagen::read_dataset_csv(dir + "/train.csv");
    const auto validation = datagen::read_dataset_csv(dir + "/validation.csv");
    const auto test = datagen::read_dataset_csv(dir + "/test.csv");
    ensure_dir(cfg.out_dir + "/models");

    std::vector<RosterEntry> roster;
    for (const auto& name : cfg.model_names) {
        RosterEntry entry;
        entry.name = name;
        entry.kind = models::kind_from_name(name);
        try {
            entry.validation =
                models::repeat_runs(entry.kind, cfg.train, train, validation, cfg.n_runs);
            models::TrainConfig first_run = cfg.train;
            first_run.seed = mix_seeds(cfg.train.seed, 0);
            entry.model = models::fit(entry.kind, first_run, train);
            models::save_model(*entry.model, cfg.out_dir + "/models/" + name + ".json");
            entry.ok = true;
        } catch (const std::exception& e) {
            entry.error = e.what(); // keep going; one failure must not sink the roster
        }
        roster.push_back(std::move(entry));
    }

    const bool any_ok = std::any_of(roster.begin(), roster.end(),
                                    [](const RosterEntry& r) { return r.ok; });
    if (!any_ok) throw DataError("every configured model failed to train");

    // Validation-set report, one row per model.
    report::Table val_table;
    val_table.title = "Validation metrics over " + std::to_string(cfg.n_runs) +
                      " runs (percent, mean +/- std)";
    val_table.headers = {"Model", "F1", "GM", "F1-GM"};
    json val_json;
    val_json["n_runs"] = cfg.n_runs;
    val_json["split"] = "validation";
    for (const auto& entry : roster) {
        if (!entry.ok) {
            val_table.rows.push_back({entry.name, "failed: " + entry.error, "-", "-"});
            val_json["models"][entry.name] = {{"error", entry.error}};
            continue;
        }
        const auto& st = entry.validation;
        val_table.rows.push_back({entry.name, mean_std_cell(st.mean.f1, st.stddev.f1),
                                  mean_std_cell(st.mean.gm, st.stddev.gm),
                                  mean_std_cell(st.mean.f1_gm, st.stddev.f1_gm)});
        json runs = json::array();
        for (const auto& r : st.runs) runs.push_back(metrics_to_json(r));
        val_json["models"][entry.name] = {{"mean", metrics_to_json(st.mean)},
                                          {"std", metrics_to_json(st.stddev)},
                                          {"runs", runs}};
    }
    val_json["config"] = json::parse(config_to_json_string(cfg));

    // Test-set comparison: rule baseline vs the best learner by mean F1-GM.
    const RosterEntry* best = nullptr;
    for (const auto& entry : roster)
        if (entry.ok && entry.kind != models::ModelKind::rules &&
            (!best || entry.validation.mean.f1_gm > best->validation.mean.f1_gm))
            best = &entry;

    report::Table test_table;
    test_table.title = "Test-set comparison (percent)";
    test_table.headers = {"Algorithm", "F1", "GM", "F1-GM"};
    json test_json;
    test_json["split"] = "test";
    auto add_test_row = [&](const std::string& name, const models::Classifier& model) {
        const auto [cm, metrics] = models::evaluate(model, test);
        test_table.rows.push_back({name, report::percent2(metrics.f1),
                                   report::percent2(metrics.gm),
                                   report::percent2(metrics.f1_gm)});
        test_json["models"][name] = {{"metrics", metrics_to_json(metrics)},
                                     {"confusion", cm_to_json(cm)}};
    };
    for (const auto& entry : roster)
        if (entry.ok && entry.kind == models::ModelKind::rules) add_test_row(entry.name, *entry.model);
    if (best) add_test_row(best->name, *best->model);
    test_json["config"] = json::parse(config_to_json_string(cfg));

    ensure_dir(cfg.out_dir);
    write_file_atomic(cfg.out_dir + "/metrics_validation.json", val_json.dump(2) + "\n");
    write_file_atomic(cfg.out_dir + "/metrics_test.json", test_json.dump(2) + "\n");

    if (cfg.format == "json") {
        out << val_json.dump(2) << "\n" << test_json.dump(2) << "\n";
    } else if (cfg.format == "csv") {
        write_file_atomic(cfg.out_dir + "/metrics_validation.csv", val_table.to_csv());
        write_file_atomic(cfg.out_dir + "/metrics_test.csv", test_table.to_csv());
        out << val_table.to_csv() << test_table.to_csv();
    } else if (cfg.format == "svg") {
        std::vector<std::string> categories;
        report::BarSeries f1{"F1", {}}, gm{"GM", {}}, f1gm{"F1-GM", {}};
        for (const auto& entry : roster) {
            if (!entry.ok) continue;
            categories.push_back(entry.name);
            f1.values.push_back(entry.validation.mean.f1 * 100.0);
            gm.values.push_back(entry.validation.mean.gm * 100.0);
            f1gm.values.push_back(entry.validation.mean.f1_gm * 100.0);
        }
        write_file_atomic(cfg.out_dir + "/metrics_validation.svg",
                          report::svg_bar_chart("Validation metrics (percent)", categories,
                                                {f1, gm, f1gm}));
        out << val_table.render() << "\n" << test_table.render();
    } else {
        out << val_table.render() << "\n" << test_table.render();
    }
    return kExitOk;
}

int cmd_analyze(const AnalyzeRequest& req, std::ostream& out) {
    const std::uint64_t n = req.counts_a.total();
    if (n == 0) throw ConfigError("analyze: empty confusion counts");
    if (req.counts_b && req.counts_b->total() != n)
        throw ConfigError("analyze: the two confusion matrices cover different call counts");

    const auto trad = timing::total_traditional(n, req.timing);
    const auto totals_a = timing::total_predicted_binary(req.counts_a, req.timing);

    report::Table table;
    table.title = "Total call time by policy (" + std::to_string(n) + " calls)";
    table.headers = {"Policy", "Prediction s", "Stage-1 s", "Stage-2 s", "Total s", "vs traditional"};
    auto add_row = [&](const std::string& name, const timing::TimeTotals& t) {
        table.rows.push_back({name, format_double(t.pred_seconds), format_double(t.stage1_seconds),
                              format_double(t.stage2_seconds), format_double(t.total_seconds),
                              report::seconds_and_hours(trad.total_seconds - t.total_seconds)});
    };
    add_row("traditional", trad);
    add_row(req.name_a, totals_a);

    json j;
    j["timing"] = timing_to_json(req.timing);
    j["n_calls"] = n;
    j["scenarios"] = {{"traditional", totals_to_json(trad)},
                      {req.name_a, totals_to_json(totals_a)}};
    j["counts"][req.name_a] = cm_to_json(req.counts_a);

    auto break_even_json = [&](const timing::BreakEvenReport& be) {
        return json{{"coefficient", be.coefficient},
                    {"direction", direction_text(be.direction)},
                    {"satisfied_at_timing", be.satisfied(req.timing)}};
    };

    std::string lines;
    auto note_break_even_vs_trad = [&](const std::string& name, const ConfusionCounts& cm) {
        try {
            const auto be = timing::break_even_vs_traditional(cm);
            lines += name + " beats traditional iff t_stage1 " + direction_text(be.direction) +
                     " " + report::fixed2(be.coefficient) + " * t_pred; at the configured " +
                     "timing this is " + (be.satisfied(req.timing) ? "met" : "not met") + ".\n";
            j["break_even"][name + "_vs_traditional"] = break_even_json(be);
        } catch (const DataError& e) {
            lines += name + ": " + e.what() + "\n";
            j["break_even"][name + "_vs_traditional"] = {{"error", e.what()}};
        }
    };
    note_break_even_vs_trad(req.name_a, req.counts_a);

    if (req.counts_b) {
        const auto totals_b = timing::total_predicted_binary(*req.counts_b, req.timing);
        add_row(req.name_b, totals_b);
        j["scenarios"][req.name_b] = totals_to_json(totals_b);
        j["counts"][req.name_b] = cm_to_json(*req.counts_b);
        note_break_even_vs_trad(req.name_b, *req.counts_b);

        const double savings = timing::compare_policies(req.counts_a, *req.counts_b, req.timing);
        lines += req.name_a + " minus " + req.name_b + ": " + report::seconds_and_hours(savings) +
                 (savings > 0 ? " saved by " + req.name_b : "") + "\n";
        j["comparison"] = {{"a", req.name_a},
                           {"b", req.name_b},
                           {"a_minus_b_seconds", savings},
                           {"a_minus_b_hours", savings / 3600.0}};
        try {
            const auto be = timing::break_even_between(timing::binary_policy_form(req.counts_a),
                                                       timing::binary_policy_form(*req.counts_b));
            lines += req.name_b + " beats " + req.name_a + " iff t_stage1 " +
                     direction_text(be.direction) + " " + report::fixed2(be.coefficient) +
                     " * t_pred.\n";
            j["comparison"]["break_even"] = break_even_json(be);
        } catch (const DataError& e) {
            j["comparison"]["break_even"] = {{"error", e.what()}};
        }

        if (req.alt_bypass_a) {
            // Documented alternate path: keep A's prediction-stage count but
            // substitute the given stage-1 bypass figure for its true
            // positives, reporting both derivations side by side.
            const timing::PolicyTimeForm alt_a{
                static_cast<double>(req.counts_a.predicted_positive()),
                static_cast<double>(n - *req.alt_bypass_a), static_cast<double>(n)};
            const auto form_b = timing::binary_policy_form(*req.counts_b);
            const double alt_savings = alt_a.total(req.timing) - form_b.total(req.timing);
            lines += "note: with the alternate bypass figure of " +
                     std::to_string(*req.alt_bypass_a) + " for " + req.name_a + " (instead of " +
                     std::to_string(req.counts_a.tp) + " true positives), " + req.name_a +
                     " minus " + req.name_b + " = " + report::seconds_and_hours(alt_savings);
            j["comparison"]["alternate"] = {{"bypass", *req.alt_bypass_a},
                                            {"a_minus_b_seconds", alt_savings},
                                            {"a_minus_b_hours", alt_savings / 3600.0}};
            try {
                const auto be = timing::break_even_between(alt_a, form_b);
                lines += "; break-even t_stage1 " + std::string(direction_text(be.direction)) +
                         " " + report::fixed2(be.coefficient) + " * t_pred";
                j["comparison"]["alternate"]["break_even"] = break_even_json(be);
            } catch (const DataError& e) {
                j["comparison"]["alternate"]["break_even"] = {{"error", e.what()}};
            }
            lines += ". The two bypass figures disagree in the source counts; both paths are "
                     "reported rather than reconciled.\n";
        }
    }

    if (!req.out_dir.empty()) {
        ensure_dir(req.out_dir);
        write_file_atomic(req.out_dir + "/analysis.json", j.dump(2) + "\n");
        if (req.format == "svg") {
            std::vector<std::string> categories;
            report::BarSeries total{"total hours", {}};
            for (const auto& row : table.rows) {
                categories.push_back(row[0]);
                total.values.push_back(parse_double(row[4]) / 3600.0);
            }
            write_file_atomic(req.out_dir + "/analysis.svg",
                              report::svg_bar_chart("Total call time (hours)", categories, {total}));
        }
    }

    if (req.format == "json")
        out << j.dump(2) << "\n";
    else if (req.format == "csv")
        out << table.to_csv() << lines;
    else
        out << table.render() << lines;
    return kExitOk;
}

int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out) {
    cfg.validate();
    const auto test = datagen::read_dataset_csv(cfg.dataset_path() + "/test.csv");
    ensure_dir(cfg.out_dir);

    sim::IvrConfig ivr;
    ivr.timing = cfg.timing;
    ivr.stochastic = cfg.stochastic;
    ivr.duration_jitter = cfg.stochastic ? cfg.jitter : 0.0;

    report::Table table;
    table.title = std::string("Simulated totals per policy (") +
                  (ivr.stochastic ? "stochastic" : "deterministic") + " mode)";
    table.headers = {"Policy", "Bypass", "Reject+IVR", "IVR only", "Total s", "Analytic s",
                     "Delta s"};

    bool check_failed = false;
    for (const auto& name : cfg.policies) {
        sim::Policy policy;
        if (name == "traditional") {
            policy = sim::Policy::traditional();
        } else if (name == "rules") {
            const std::string& text =
                cfg.train.rules_text.empty() ? models::default_rules_text() : cfg.train.rules_text;
            policy = sim::Policy::rules(std::make_shared<models::RuleSetModel>(
                models::RuleSetModel::parse(text, test.feature_names, cfg.train.threshold)));
        } else {
            models::kind_from_name(name); // validate before touching the disk
            policy = sim::Policy::model(
                models::load_model(cfg.out_dir + "/models/" + name + ".json"));
        }

        const auto rep = sim::simulate(policy, test, ivr, cfg.gen.seed);
        const double analytic = timing::total_predicted_binary(rep.cm, cfg.timing).total_seconds;
        const double delta = rep.totals.total_seconds - analytic;
        if (!ivr.stochastic && delta != 0.0) check_failed = true;

        table.rows.push_back({name, std::to_string(rep.count(sim::CallPath::bypass)),
                              std::to_string(rep.count(sim::CallPath::reject_then_ivr)),
                              std::to_string(rep.count(sim::CallPath::ivr_only)),
                              format_double(rep.totals.total_seconds), format_double(analytic),
                              format_double(delta)});

        json j;
        j["policy"] = name;
        j["mode"] = ivr.stochastic ? "stochastic" : "deterministic";
        j["seed"] = rep.seed;
        j["totals"] = totals_to_json(rep.totals);
        j["confusion"] = cm_to_json(rep.cm);
        j["analytic_total_seconds"] = analytic;
        j["delta_seconds"] = delta;
        j["timing"] = timing_to_json(cfg.timing);
        j["jitter"] = ivr.duration_jitter;
        j["ivr"] = {{"n_menu_options", ivr.n_menu_options},
                    {"n_departments", ivr.n_departments}};
        write_file_atomic(cfg.out_dir + "/sim_" + name + ".json", j.dump(2) + "\n");

        if (cfg.format == "csv") {
            std::string calls_csv = "caller_id,path,duration_seconds\n";
            for (const auto& call : rep.per_call) {
                calls_csv += std::to_string(call.caller_id);
                calls_csv += ",";
                calls_csv += sim::path_name(call.path);
                calls_csv += ",";
                calls_csv += format_double(call.duration_seconds);
                calls_csv += "\n";
            }
            write_file_atomic(cfg.out_dir + "/sim_" + name + "_calls.csv", calls_csv);
        }
    }

    out << (cfg.format == "csv" ? table.to_csv() : table.render());
    if (check_failed)
        throw CheckError("deterministic simulation disagrees with the closed-form totals");
    return kExitOk;
}

int cmd_report(const std::string& input_path, const std::string& format,
               const std::string& out_dir, std::ostream& out) {
    json j;
    try {
        j = json::parse(read_file(input_path));
    } catch (const json::parse_error& e) {
        throw DataError("report input " + input_path + " is not valid JSON: " + e.what());
    }

    report::Table table;
    std::vector<std::string> categories;
    std::vector<report::BarSeries> series;

    if (j.contains("models")) { // metrics report
        table.title = "Metrics (" + j.value("split", std::string("?")) + ", percent)";
        table.headers = {"Model", "F1", "GM", "F1-GM"};
        report::BarSeries f1{"F1", {}}, gm{"GM", {}}, f1gm{"F1-GM", {}};
        for (const auto& [name, entry] : j["models"].items()) {
            if (entry.contains("error")) {
                table.rows.push_back({name, "failed: " + entry["error"].get<std::string>(), "-", "-"});
                continue;
            }
            const json& m = entry.contains("mean") ? entry["mean"] : entry["metrics"];
            table.rows.push_back({name, report::percent2(m["f1"].get<double>()),
                                  report::percent2(m["gm"].get<double>()),
                                  report::percent2(m["f1_gm"].get<double>())});
            categories.push_back(name);
            f1.values.push_back(m["f1"].get<double>() * 100.0);
            gm.values.push_back(m["gm"].get<double>() * 100.0);
            f1gm.values.push_back(m["f1_gm"].get<double>() * 100.0);
        }
        series = {f1, gm, f1gm};
    } else if (j.contains("scenarios")) { // analysis report
        table.title = "Total call time by policy";
        table.headers = {"Policy", "Prediction s", "Stage-1 s", "Stage-2 s", "Total s"};
        report::BarSeries hours{"total hours", {}};
        for (const auto& [name, t] : j["scenarios"].items()) {
            table.rows.push_back({name, format_double(t["pred_seconds"].get<double>()),
                                  format_double(t["stage1_seconds"].get<double>()),
                                  format_double(t["stage2_seconds"].get<double>()),
                                  format_double(t["total_seconds"].get<double>())});
            categories.push_back(name);
            hours.values.push_back(t["total_seconds"].get<double>() / 3600.0);
        }
        series = {hours};
    } else if (j.contains("policy")) { // simulation report
        table.title = "Simulation (" + j.value("mode", std::string("?")) + ")";
        table.headers = {"Policy", "Total s", "Analytic s", "Delta s"};
        table.rows.push_back({j["policy"].get<std::string>(),
                              format_double(j["totals"]["total_seconds"].get<double>()),
                              format_double(j["analytic_total_seconds"].get<double>()),
                              format_double(j["delta_seconds"].get<double>())});
    } else {
        throw DataError("unrecognized report structure in " + input_path);
    }

    if (format == "json") {
        out << j.dump(2) << "\n";
    } else if (format == "csv") {
        out << table.to_csv();
    } else if (format == "svg") {
        const std::string svg = report::svg_bar_chart(table.title, categories, series);
        if (!out_dir.empty()) {
            ensure_dir(out_dir);
            write_file_atomic(out_dir + "/report.svg", svg);
            out << "wrote " << out_dir << "/report.svg\n";
        } else {
            out << svg;
        }
    } else {
        out << table.render();
    }
    return kExitOk;
}

} // namespace pairing::cli
