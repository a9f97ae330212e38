#include <doctest.h>

#include <cmath>
#include <memory>

#include "pairing/datagen.hpp"
#include "pairing/models.hpp"
#include "pairing/rng.hpp"
#include "pairing/rules.hpp"
#include "pairing/simulator.hpp"
#include "pairing/timing.hpp"

using namespace pairing;
using namespace pairing::sim;

namespace {

const TimingParams kCaseStudy{45.0, 180.0, 5.0};

IvrConfig deterministic_cfg() {
    IvrConfig cfg;
    cfg.timing = kCaseStudy;
    return cfg;
}

datagen::LabeledDataset label_as_feature_workload(const std::vector<int>& labels) {
    datagen::LabeledDataset ds;
    ds.feature_names = {"f0"};
    for (std::size_t i = 0; i < labels.size(); ++i) {
        CallRecord rec;
        rec.caller_id = i + 1;
        rec.features = {static_cast<double>(labels[i])};
        rec.true_label = labels[i] ? Label::service_a() : Label::other();
        ds.records.push_back(std::move(rec));
    }
    return ds;
}

Policy oracle_policy(const datagen::LabeledDataset& ds) {
    return Policy::rules(std::make_shared<models::RuleSetModel>(
        models::RuleSetModel::parse("f0 >= 1\n", ds.feature_names)));
}

} // namespace

TEST_CASE("traditional policy walks every call through the full IVR") {
    const auto workload = label_as_feature_workload({0, 0, 1, 0, 0, 1, 0, 0, 0, 0});
    const auto rep = simulate(Policy::traditional(), workload, deterministic_cfg(), 1);
    CHECK(rep.totals.total_seconds == 10 * 225.0);
    CHECK(rep.cm.tp == 0);
    CHECK(rep.cm.fp == 0);
    CHECK(rep.cm.fn == 2);
    CHECK(rep.cm.tn == 8);
    CHECK(rep.count(CallPath::ivr_only) == 10);
    CHECK(rep.totals.pred_seconds == 0.0);
}

TEST_CASE("perfect predictions bypass stage 1 on every positive call") {
    const auto workload = label_as_feature_workload(std::vector<int>(10, 1));
    const auto rep = simulate(oracle_policy(workload), workload, deterministic_cfg(), 1);
    CHECK(rep.totals.total_seconds == 10 * 185.0);
    CHECK(rep.cm.tp == 10);
    CHECK(rep.count(CallPath::bypass) == 10);
}

TEST_CASE("paths partition the workload and line up with the confusion counts") {
    // f0 carries a noisy copy of the label so all four cells appear.
    datagen::LabeledDataset ds;
    ds.feature_names = {"f0"};
    Rng rng(7);
    for (int i = 0; i < 500; ++i) {
        CallRecord rec;
        rec.caller_id = i + 1;
        const bool positive = rng.uniform() < 0.3;
        const bool looks_positive = rng.uniform() < (positive ? 0.8 : 0.2);
        rec.features = {looks_positive ? 1.0 : 0.0};
        rec.true_label = positive ? Label::service_a() : Label::other();
        ds.records.push_back(std::move(rec));
    }
    const auto rep = simulate(oracle_policy(ds), ds, deterministic_cfg(), 3);
    CHECK(rep.cm.total() == 500);
    CHECK(rep.count(CallPath::bypass) == rep.cm.tp);
    CHECK(rep.count(CallPath::reject_then_ivr) == rep.cm.fp);
    CHECK(rep.count(CallPath::ivr_only) == rep.cm.tn + rep.cm.fn);
    CHECK(rep.per_call.size() == 500);

    // Deterministic totals equal the closed form exactly.
    CHECK(rep.totals.total_seconds ==
          timing::total_predicted_binary(rep.cm, kCaseStudy).total_seconds);

    // Per-call durations sum to the totals (within float accumulation error).
    double sum = 0.0;
    for (const auto& call : rep.per_call) sum += call.duration_seconds;
    CHECK(sum == doctest::Approx(rep.totals.total_seconds).epsilon(1e-9));
}

TEST_CASE("trained-model policy matches the closed form on the synthetic test split") {
    const auto bundle = datagen::generate_datasets(datagen::GenConfig{}.scaled(0.003));
    models::TrainConfig tc;
    tc.mlp.epochs = 20;
    std::shared_ptr<const models::Classifier> model =
        models::fit(models::ModelKind::mlp, tc, bundle.train);
    const auto rep = simulate(Policy::model(model), bundle.test, deterministic_cfg(), 11);
    CHECK(rep.totals.total_seconds ==
          timing::total_predicted_binary(rep.cm, kCaseStudy).total_seconds);
    CHECK(rep.totals.stage1_seconds ==
          timing::total_predicted_binary(rep.cm, kCaseStudy).stage1_seconds);
}

TEST_CASE("replay_confusion reproduces the case-study decompositions") {
    const ConfusionCounts mlp_row{58308, 1099, 579, 799};
    const auto rep = replay_confusion(mlp_row, deterministic_cfg(), 5);
    CHECK(rep.cm == mlp_row);
    CHECK(rep.totals.pred_seconds == 1898.0 * 5.0); // prediction overhead
    const auto trad = timing::total_traditional(60785, kCaseStudy);
    CHECK(trad.total_seconds - rep.totals.total_seconds == 799.0 * 45.0 - 1898.0 * 5.0);

    const ConfusionCounts rules_row{41675, 17732, 301, 1077};
    const auto rules_rep = replay_confusion(rules_row, deterministic_cfg(), 5);
    CHECK(rules_rep.totals.pred_seconds == 94045.0); // 18809 * 5

    // All-negative counts degenerate to the traditional flow.
    const ConfusionCounts all_tn{60785, 0, 0, 0};
    const auto tn_rep = replay_confusion(all_tn, deterministic_cfg(), 5);
    CHECK(tn_rep.totals.total_seconds == trad.total_seconds);
    CHECK(tn_rep.count(CallPath::ivr_only) == 60785);
}

TEST_CASE("deterministic totals equal the closed forms for random counts and timings") {
    Rng rng(99);
    for (int i = 0; i < 100; ++i) {
        const ConfusionCounts cm{rng.uniform_int(5000), rng.uniform_int(500),
                                 rng.uniform_int(500), 1 + rng.uniform_int(500)};
        const double t1 = rng.uniform(5.0, 200.0);
        const double t2 = rng.uniform(1.0, 500.0);
        const double tp = rng.uniform(0.01, 0.95) * t1;
        IvrConfig cfg;
        cfg.timing = TimingParams(t1, t2, tp);
        const auto rep = replay_confusion(cm, cfg, i);
        const auto closed = timing::total_predicted_binary(cm, cfg.timing);
        CHECK(rep.totals.total_seconds == closed.total_seconds);
        CHECK(rep.totals.pred_seconds == closed.pred_seconds);
        CHECK(rep.totals.stage1_seconds == closed.stage1_seconds);
        CHECK(rep.totals.stage2_seconds == closed.stage2_seconds);
    }
}

TEST_CASE("stochastic totals concentrate around the deterministic value") {
    const ConfusionCounts cm{5000, 300, 100, 200};
    IvrConfig cfg = deterministic_cfg();
    cfg.stochastic = true;
    cfg.duration_jitter = 0.3;

    const double analytic = timing::total_predicted_binary(cm, cfg.timing).total_seconds;
    std::vector<double> totals;
    for (int seed = 0; seed < 200; ++seed)
        totals.push_back(replay_confusion(cm, cfg, seed).totals.total_seconds);
    double mean = 0.0;
    for (double t : totals) mean += t / totals.size();
    double var = 0.0;
    for (double t : totals) var += (t - mean) * (t - mean) / (totals.size() - 1);
    const double se = std::sqrt(var / totals.size());
    CHECK(std::abs(mean - analytic) <= 3.0 * se);

    // Stochastic per-call durations must sum to the reported totals.
    const auto rep = replay_confusion(cm, cfg, 0);
    double sum = 0.0;
    for (const auto& call : rep.per_call) sum += call.duration_seconds;
    CHECK(sum == doctest::Approx(rep.totals.total_seconds).epsilon(1e-9));
    CHECK(rep.totals.total_seconds != analytic); // jitter actually applied
}

TEST_CASE("identical seeds reproduce the simulation bit for bit") {
    const ConfusionCounts cm{500, 30, 10, 20};
    IvrConfig cfg = deterministic_cfg();
    cfg.stochastic = true;
    cfg.duration_jitter = 0.5;
    const auto a = replay_confusion(cm, cfg, 42);
    const auto b = replay_confusion(cm, cfg, 42);
    REQUIRE(a.per_call.size() == b.per_call.size());
    for (std::size_t i = 0; i < a.per_call.size(); ++i) {
        CHECK(a.per_call[i].duration_seconds == b.per_call[i].duration_seconds);
        CHECK(a.per_call[i].path == b.per_call[i].path);
    }
    CHECK(a.totals.total_seconds == b.totals.total_seconds);

    const auto c = replay_confusion(cm, cfg, 43);
    CHECK(a.totals.total_seconds != c.totals.total_seconds);
}

TEST_CASE("simulator input validation") {
    const auto workload = label_as_feature_workload({0, 1});
    datagen::LabeledDataset empty;
    empty.feature_names = {"f0"};
    CHECK_THROWS_AS(simulate(Policy::traditional(), empty, deterministic_cfg(), 1), DataError);

    // Classifier trained on a different schema cannot drive this workload.
    datagen::LabeledDataset other;
    other.feature_names = {"f0", "f1"};
    const auto wrong = oracle_policy(other);
    CHECK_THROWS_AS(simulate(wrong, workload, deterministic_cfg(), 1), DataError);

    CHECK_THROWS_AS(Policy::model(nullptr), ConfigError);
    CHECK_THROWS_AS(replay_confusion(ConfusionCounts{}, deterministic_cfg(), 1), DataError);

    IvrConfig bad = deterministic_cfg();
    bad.n_departments = 1;
    CHECK_THROWS_AS(simulate(Policy::traditional(), workload, bad, 1), ConfigError);
}
