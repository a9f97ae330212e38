#include "pairing/simulator.hpp"

#include "pairing/rng.hpp"

namespace pairing::sim {

Policy Policy::rules(std::shared_ptr<const models::Classifier> rules_model) {
    if (!rules_model) throw ConfigError("rules policy needs a rule set");
    return {PolicyKind::rules, std::move(rules_model)};
}

Policy Policy::model(std::shared_ptr<const models::Classifier> clf) {
    if (!clf) throw ConfigError("model policy needs a trained classifier");
    return {PolicyKind::model, std::move(clf)};
}

const char* policy_name(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::traditional: return "traditional";
        case PolicyKind::rules: return "rules";
        case PolicyKind::model: return "model";
    }
    return "?";
}

const char* path_name(CallPath path) {
    switch (path) {
        case CallPath::bypass: return "bypass";
        case CallPath::reject_then_ivr: return "reject_then_ivr";
        case CallPath::ivr_only: return "ivr_only";
    }
    return "?";
}

void IvrConfig::validate() const {
    if (n_menu_options < 1) throw ConfigError("IVR menu needs at least one option");
    if (n_departments < 2) throw ConfigError("need at least two departments");
    if (duration_jitter < 0.0) throw ConfigError("duration jitter must be non-negative");
}

std::uint64_t SimReport::count(CallPath path) const {
    std::uint64_t n = 0;
    for (const auto& call : per_call)
        if (call.path == path) ++n;
    return n;
}

namespace {

struct StageDraws {
    double stage1;
    double stage2;
    double pred;
};

StageDraws draw_stages(const IvrConfig& cfg, Rng& rng) {
    if (!cfg.stochastic || cfg.duration_jitter <= 0.0)
        return {cfg.timing.t_stage1, cfg.timing.t_stage2, cfg.timing.t_pred};
    return {rng.gamma_mean_cv(cfg.timing.t_stage1, cfg.duration_jitter),
            rng.gamma_mean_cv(cfg.timing.t_stage2, cfg.duration_jitter),
            rng.gamma_mean_cv(cfg.timing.t_pred, cfg.duration_jitter)};
}

// Records one call given its prediction outcome and accumulates stage time.
void play_call(std::uint64_t caller_id, bool predicted_positive, bool correct,
               const IvrConfig& cfg, Rng& rng, SimReport& report, double& pred_acc,
               double& stage1_acc, double& stage2_acc) {
    const StageDraws draws = draw_stages(cfg, rng);
    PerCall call;
    call.caller_id = caller_id;
    if (predicted_positive) {
        if (correct) {
            call.path = CallPath::bypass;
            call.duration_seconds = draws.pred + draws.stage2;
            pred_acc += draws.pred;
        } else {
            call.path = CallPath::reject_then_ivr;
            call.duration_seconds = draws.pred + draws.stage1 + draws.stage2;
            pred_acc += draws.pred;
            stage1_acc += draws.stage1;
        }
    } else {
        call.path = CallPath::ivr_only;
        call.duration_seconds = draws.stage1 + draws.stage2;
        stage1_acc += draws.stage1;
    }
    stage2_acc += draws.stage2;
    report.per_call.push_back(call);
}

void finalize_totals(SimReport& report, const IvrConfig& cfg, double pred_acc, double stage1_acc,
                     double stage2_acc) {
    if (cfg.stochastic && cfg.duration_jitter > 0.0) {
        report.totals.n_calls = report.cm.total();
        report.totals.pred_seconds = pred_acc;
        report.totals.stage1_seconds = stage1_acc;
        report.totals.stage2_seconds = stage2_acc;
        report.totals.total_seconds = pred_acc + stage1_acc + stage2_acc;
    } else {
        // Deterministic mode reports the closed-form totals so the
        // analytic cross-check holds to exact arithmetic.
        report.totals = timing::total_predicted_binary(report.cm, cfg.timing);
    }
}

} // namespace

SimReport simulate(const Policy& policy, const datagen::LabeledDataset& workload,
                   const IvrConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    if (workload.records.empty()) throw DataError("simulate: empty workload");
    if (policy.kind != PolicyKind::traditional) {
        if (!policy.classifier) throw ConfigError("prediction policy without a classifier");
        if (policy.classifier->dimension() != static_cast<int>(workload.feature_names.size()))
            throw DataError("simulate: classifier dimensionality does not match the workload");
    }

    SimReport report;
    report.seed = seed;
    report.per_call.reserve(workload.records.size());
    Rng rng(mix_seeds(seed, 0x73696dULL)); // "sim" stream

    double pred_acc = 0.0, stage1_acc = 0.0, stage2_acc = 0.0;
    for (const auto& rec : workload.records) {
        const bool actual_positive = rec.true_label.positive();
        bool predicted_positive = false;
        if (policy.kind != PolicyKind::traditional)
            predicted_positive = policy.classifier->predict(rec.features).positive();

        if (predicted_positive)
            actual_positive ? ++report.cm.tp : ++report.cm.fp;
        else
            actual_positive ? ++report.cm.fn : ++report.cm.tn;

        // The confirmation message is reliable: the caller accepts the
        // prediction exactly when it is correct.
        play_call(rec.caller_id, predicted_positive, predicted_positive == actual_positive, cfg,
                  rng, report, pred_acc, stage1_acc, stage2_acc);
    }
    finalize_totals(report, cfg, pred_acc, stage1_acc, stage2_acc);
    return report;
}

SimReport replay_confusion(const ConfusionCounts& cm, const IvrConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    if (cm.total() == 0) throw DataError("replay_confusion: empty confusion matrix");

    SimReport report;
    report.seed = seed;
    report.cm = cm;
    report.per_call.reserve(cm.total());
    Rng rng(mix_seeds(seed, 0x7265706cULL)); // "repl" stream

    double pred_acc = 0.0, stage1_acc = 0.0, stage2_acc = 0.0;
    std::uint64_t caller_id = 1;
    for (std::uint64_t i = 0; i < cm.tp; ++i)
        play_call(caller_id++, true, true, cfg, rng, report, pred_acc, stage1_acc, stage2_acc);
    for (std::uint64_t i = 0; i < cm.fp; ++i)
        play_call(caller_id++, true, false, cfg, rng, report, pred_acc, stage1_acc, stage2_acc);
    for (std::uint64_t i = 0; i < cm.fn; ++i)
        play_call(caller_id++, false, false, cfg, rng, report, pred_acc, stage1_acc, stage2_acc);
    for (std::uint64_t i = 0; i < cm.tn; ++i)
        play_call(caller_id++, false, true, cfg, rng, report, pred_acc, stage1_acc, stage2_acc);

    finalize_totals(report, cfg, pred_acc, stage1_acc, stage2_acc);
    return report;
}

} // namespace pairing::sim
