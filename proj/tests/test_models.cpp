#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <memory>

#include "pairing/boosting.hpp"
#include "pairing/datagen.hpp"
#include "pairing/forest.hpp"
#include "pairing/linear.hpp"
#include "pairing/mlp.hpp"
#include "pairing/models.hpp"
#include "pairing/rng.hpp"
#include "pairing/rules.hpp"
#include "pairing/textio.hpp"
#include "pairing/tree.hpp"

using namespace pairing;
using namespace pairing::models;

namespace {

datagen::LabeledDataset make_dataset(const std::vector<std::vector<double>>& x,
                                     const std::vector<int>& y,
                                     std::vector<std::string> names = {}) {
    datagen::LabeledDataset ds;
    if (names.empty())
        for (std::size_t j = 0; j < x[0].size(); ++j) names.push_back("f" + std::to_string(j));
    ds.feature_names = std::move(names);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CallRecord rec;
        rec.caller_id = i + 1;
        rec.timestamp = make_timestamp(2022, 1, 1) + static_cast<Timestamp>(i);
        rec.features = x[i];
        rec.true_label = y[i] ? Label::service_a() : Label::other();
        ds.records.push_back(std::move(rec));
    }
    return ds;
}

FeatureScaler identity_scaler(int d) {
    FeatureScaler s;
    s.mean.assign(d, 0.0);
    s.stddev.assign(d, 1.0);
    return s;
}

// Exhaustive root-split oracle for small classification sets: every
// (feature, midpoint threshold) pair, weighted Gini, first-best tie-break.
struct OracleSplit {
    bool found = false;
    double score = 1e300;
    int feature = -1;
    double threshold = 0.0;
};

OracleSplit brute_force_root_split(const std::vector<std::vector<double>>& x,
                                   const std::vector<int>& y, int min_leaf) {
    OracleSplit best;
    const int n = static_cast<int>(x.size());
    const int d = static_cast<int>(x[0].size());
    for (int f = 0; f < d; ++f) {
        std::vector<double> values;
        for (const auto& row : x) values.push_back(row[f]);
        std::vector<double> sorted = values;
        std::sort(sorted.begin(), sorted.end());
        for (int i = 0; i + 1 < n; ++i) {
            if (sorted[i] == sorted[i + 1]) continue;
            double threshold = sorted[i] + (sorted[i + 1] - sorted[i]) / 2.0;
            if (threshold >= sorted[i + 1]) threshold = sorted[i];
            double wl = 0, pl = 0, wr = 0, pr = 0;
            for (int k = 0; k < n; ++k) {
                if (values[k] <= threshold) {
                    wl += 1;
                    pl += y[k];
                } else {
                    wr += 1;
                    pr += y[k];
                }
            }
            if (wl < min_leaf || wr < min_leaf) continue;
            const double score = (wl > 0 ? pl * (wl - pl) / wl : 0.0) +
                                 (wr > 0 ? pr * (wr - pr) / wr : 0.0);
            if (score < best.score - 1e-15) {
                best = {true, score, f, threshold};
            }
        }
    }
    return best;
}

double gini_score_of_split(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                           int feature, double threshold) {
    double wl = 0, pl = 0, wr = 0, pr = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (x[k][feature] <= threshold) {
            wl += 1;
            pl += y[k];
        } else {
            wr += 1;
            pr += y[k];
        }
    }
    return (wl > 0 ? pl * (wl - pl) / wl : 0.0) + (wr > 0 ? pr * (wr - pr) / wr : 0.0);
}

} // namespace

TEST_CASE("logistic regression separates a linearly separable toy set") {
    const auto ds = make_dataset({{0.0, 0.0}, {0.1, 0.2}, {1.0, 1.0}, {0.9, 0.8}}, {0, 0, 1, 1});
    TrainConfig cfg;
    cfg.lr.epochs = 500;
    const auto model = fit(ModelKind::lr, cfg, ds);
    for (const auto& rec : ds.records)
        CHECK(model->predict(rec.features) == rec.true_label);
}

TEST_CASE("decision tree memorizes a small pure-leaf set") {
    const std::vector<std::vector<double>> x = {{0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {0, 1, 1},
                                                {1, 0, 0}, {1, 0, 1}, {1, 1, 0}, {1, 1, 1}};
    const std::vector<int> y = {0, 1, 1, 0, 1, 0, 0, 1}; // parity needs depth 3
    const auto ds = make_dataset(x, y);
    TrainConfig cfg;
    cfg.dt.max_depth = 3;
    cfg.dt.min_samples_leaf = 1;
    const auto model = fit(ModelKind::dt, cfg, ds);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(model->predict(x[i]).positive() == (y[i] == 1));
}

TEST_CASE("predict_proba hand checks") {
    // Logistic layer: sigmoid(w.x + b) with an identity scaler.
    LogisticModel lr({0.5, -1.0, 2.0}, 0.25, identity_scaler(3), {"a", "b", "c"}, 0.5);
    const std::vector<double> x{1.0, 2.0, 0.5};
    const double logit = 0.5 * 1.0 - 1.0 * 2.0 + 2.0 * 0.5 + 0.25;
    CHECK(lr.predict_proba(x) == doctest::Approx(1.0 / (1.0 + std::exp(-logit))).epsilon(1e-12));

    // All-zero MLP weights land exactly on 0.5.
    const MlpTopology topo = MlpTopology::make(3, {4});
    MlpModel mlp(topo, std::vector<double>(topo.n_params(), 0.0), identity_scaler(3),
                 {"a", "b", "c"}, 0.5);
    CHECK(mlp.predict_proba(x) == 0.5);
    CHECK(mlp.predict(x) == Label::service_a()); // ties resolve positive

    std::vector<double> wrong_dim{1.0, 2.0};
    CHECK_THROWS_AS(lr.predict_proba(wrong_dim), DataError);
}

TEST_CASE("threshold semantics and monotonicity") {
    LogisticModel at_half({0.0}, 0.0, identity_scaler(1), {"a"}, 0.5);
    const std::vector<double> x{1.0};
    CHECK(at_half.predict_proba(x) == 0.5);
    CHECK(at_half.predict(x).positive()); // >= convention

    const double logit_049 = std::log(0.49 / 0.51);
    LogisticModel below({0.0}, logit_049, identity_scaler(1), {"a"}, 0.5);
    CHECK(below.predict_proba(x) == doctest::Approx(0.49).epsilon(1e-12));
    CHECK_FALSE(below.predict(x).positive());

    CHECK_THROWS_AS(at_half.set_threshold(0.0), ConfigError);
    CHECK_THROWS_AS(at_half.set_threshold(1.0), ConfigError);

    // Raising the threshold never flips a negative to positive, and tp/fp
    // are non-increasing along the way.
    const datagen::GenConfig gen = datagen::GenConfig{}.scaled(0.002);
    const auto bundle = datagen::generate_datasets(gen);
    TrainConfig cfg;
    cfg.lr.epochs = 300;
    const auto model = fit(ModelKind::lr, cfg, bundle.train);
    std::uint64_t prev_tp = ~0ull, prev_fp = ~0ull;
    for (double threshold : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        TrainConfig run = cfg;
        run.threshold = threshold;
        const auto m = fit(ModelKind::lr, run, bundle.train);
        const auto [cm, metrics] = evaluate(*m, bundle.test);
        CHECK(cm.tp <= prev_tp);
        CHECK(cm.fp <= prev_fp);
        prev_tp = cm.tp;
        prev_fp = cm.fp;
    }
}

TEST_CASE("lr analytic gradient matches central finite differences") {
    Rng rng(404);
    for (int instance = 0; instance < 20; ++instance) {
        const int n = 3 + static_cast<int>(rng.uniform_int(6));
        const int d = 2 + static_cast<int>(rng.uniform_int(4));
        DenseData data;
        data.n = n;
        data.d = d;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < d; ++j) data.x.push_back(rng.uniform(-2.0, 2.0));
            data.y.push_back(rng.uniform() < 0.5 ? 0.0 : 1.0);
        }
        const double l2 = rng.uniform(0.0, 0.1);
        std::vector<double> params(d + 1);
        for (auto& p : params) p = rng.uniform(-1.0, 1.0);

        std::vector<double> grad(params.size());
        lr_loss_and_gradient(data, params, l2, grad);

        const double h = 1e-6;
        double worst = 0.0;
        for (std::size_t k = 0; k < params.size(); ++k) {
            std::vector<double> plus = params, minus = params;
            plus[k] += h;
            minus[k] -= h;
            std::vector<double> scratch(params.size());
            const double fd = (lr_loss_and_gradient(data, plus, l2, scratch) -
                               lr_loss_and_gradient(data, minus, l2, scratch)) /
                              (2 * h);
            worst = std::max(worst, std::abs(fd - grad[k]) / std::max(1.0, std::abs(grad[k])));
        }
        CHECK(worst < 1e-4);
    }
}

TEST_CASE("mlp analytic gradient matches central finite differences") {
    Rng rng(505);
    for (int instance = 0; instance < 20; ++instance) {
        const int n = 2 + static_cast<int>(rng.uniform_int(5));
        const int d = 2 + static_cast<int>(rng.uniform_int(3));
        const int hidden = 2 + static_cast<int>(rng.uniform_int(4));
        const MlpTopology topo = MlpTopology::make(d, {hidden});
        DenseData data;
        data.n = n;
        data.d = d;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < d; ++j) data.x.push_back(rng.uniform(-1.5, 1.5));
            data.y.push_back(rng.uniform() < 0.5 ? 0.0 : 1.0);
        }
        std::vector<double> params(topo.n_params());
        for (auto& p : params) p = rng.uniform(-0.8, 0.8);

        std::vector<double> grad(params.size());
        mlp_loss_and_gradient(topo, params, data, grad);

        const double h = 1e-6;
        double worst = 0.0;
        for (std::size_t k = 0; k < params.size(); ++k) {
            std::vector<double> plus = params, minus = params;
            plus[k] += h;
            minus[k] -= h;
            std::vector<double> scratch(params.size());
            const double fd = (mlp_loss_and_gradient(topo, plus, data, scratch) -
                               mlp_loss_and_gradient(topo, minus, data, scratch)) /
                              (2 * h);
            worst = std::max(worst, std::abs(fd - grad[k]) / std::max(1.0, std::abs(grad[k])));
        }
        CHECK(worst < 1e-4);
    }
}

TEST_CASE("tree root split matches the exhaustive oracle on small sets") {
    Rng rng(606);
    int checked = 0;
    for (int instance = 0; instance < 200; ++instance) {
        const int n = 2 + static_cast<int>(rng.uniform_int(11)); // up to 12 points
        std::vector<std::vector<double>> x(n, std::vector<double>(3));
        std::vector<int> y(n);
        std::vector<double> targets(n), weights(n, 1.0);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < 3; ++j) x[i][j] = static_cast<double>(rng.uniform_int(2));
            y[i] = static_cast<int>(rng.uniform_int(2));
            targets[i] = y[i];
        }

        std::vector<double> flat;
        for (const auto& row : x) flat.insert(flat.end(), row.begin(), row.end());
        DesignMatrix X(flat, n, 3);
        TreeConfig cfg;
        cfg.max_depth = 1;
        cfg.min_samples_leaf = 1;
        const Tree tree = build_tree(X, targets, weights, cfg);

        const OracleSplit oracle = brute_force_root_split(x, y, cfg.min_samples_leaf);
        const TreeNode& root = tree.nodes[0];
        if (!oracle.found) continue; // pure or unsplittable either way
        ++checked;
        if (root.feature < 0) {
            // builder declared a leaf: legal only when the node is pure
            bool pure = true;
            for (int i = 1; i < n; ++i) pure = pure && y[i] == y[0];
            CHECK(pure);
            continue;
        }
        const double got = gini_score_of_split(x, y, root.feature, root.threshold);
        CHECK(got == doctest::Approx(oracle.score).epsilon(1e-12));
    }
    CHECK(checked > 100);
}

TEST_CASE("single-tree forest with no randomness equals the decision tree") {
    const datagen::GenConfig gen = datagen::GenConfig{}.scaled(0.003);
    const auto bundle = datagen::generate_datasets(gen);
    TrainConfig cfg;
    cfg.rf.n_trees = 1;
    cfg.rf.bootstrap = false;
    cfg.rf.feature_fraction = 1.0;
    cfg.rf.max_depth = cfg.dt.max_depth;
    cfg.rf.min_samples_leaf = cfg.dt.min_samples_leaf;
    const auto dt = fit(ModelKind::dt, cfg, bundle.train);
    const auto rf = fit(ModelKind::rf, cfg, bundle.train);
    for (const auto& rec : bundle.test.records)
        CHECK(dt->predict_proba(rec.features) == rf->predict_proba(rec.features));
}

TEST_CASE("gbt training loss is non-increasing per round") {
    const datagen::GenConfig gen = datagen::GenConfig{}.scaled(0.003);
    const auto bundle = datagen::generate_datasets(gen);
    TrainConfig cfg;
    cfg.gbt.n_rounds = 60;
    const auto model = fit(ModelKind::gbt, cfg, bundle.train);
    const auto& loss = model->training_loss();
    REQUIRE(loss.size() == 60);
    for (std::size_t i = 1; i < loss.size(); ++i)
        CHECK(loss[i] <= loss[i - 1] + 1e-12);
}

TEST_CASE("training is deterministic given the seed") {
    const datagen::GenConfig gen = datagen::GenConfig{}.scaled(0.002);
    const auto bundle = datagen::generate_datasets(gen);
    TrainConfig cfg;
    cfg.mlp.epochs = 10;
    cfg.rf.n_trees = 10;
    for (ModelKind kind : {ModelKind::mlp, ModelKind::rf, ModelKind::gbt}) {
        const auto a = fit(kind, cfg, bundle.train);
        const auto b = fit(kind, cfg, bundle.train);
        CHECK(model_to_json_string(*a) == model_to_json_string(*b));
    }
    TrainConfig other = cfg;
    other.seed = cfg.seed + 1;
    const auto a = fit(ModelKind::mlp, cfg, bundle.train);
    const auto c = fit(ModelKind::mlp, other, bundle.train);
    CHECK(model_to_json_string(*a) != model_to_json_string(*c));
}

TEST_CASE("fit input validation") {
    TrainConfig cfg;
    const auto single_class = make_dataset({{0.0}, {1.0}}, {1, 1});
    CHECK_THROWS_AS(fit(ModelKind::lr, cfg, single_class), DataError);

    auto bad = make_dataset({{0.0}, {1.0}}, {0, 1});
    bad.records[0].features[0] = std::nan("");
    CHECK_THROWS_AS(fit(ModelKind::dt, cfg, bad), DataError);

    datagen::LabeledDataset empty;
    empty.feature_names = {"f0"};
    CHECK_THROWS_AS(fit(ModelKind::lr, cfg, empty), DataError);

    TrainConfig broken;
    broken.lr.learning_rate = -1.0;
    CHECK_THROWS_AS(fit(ModelKind::lr, broken, single_class), ConfigError);
}

TEST_CASE("rule set parsing, firing, and errors") {
    const std::vector<std::string> names{"f0", "f1", "f2"};
    const auto model = RuleSetModel::parse("f0 >= 1 AND f2 < 0.5\nf1 == 2\n", names);
    CHECK(model.rules().size() == 2);
    CHECK(model.predict_proba(std::vector<double>{1.0, 0.0, 0.0}) == 1.0); // rule 1 fires
    CHECK(model.predict_proba(std::vector<double>{1.0, 0.0, 0.7}) == 0.0);
    CHECK(model.predict_proba(std::vector<double>{0.0, 2.0, 0.9}) == 1.0); // rule 2 fires
    CHECK(model.predict(std::vector<double>{1.0, 0.0, 0.0}).positive());

    CHECK_THROWS_AS(RuleSetModel::parse("unknown >= 1\n", names), ConfigError);
    CHECK_THROWS_AS(RuleSetModel::parse("f0 >= \n", names), ConfigError);
    CHECK_THROWS_AS(RuleSetModel::parse("f0 ~ 1\n", names), ConfigError);
    CHECK_THROWS_AS(RuleSetModel::parse("f0 >= 1 OR f1 >= 1\n", names), ConfigError);

    // Comments and blank lines are skipped; text round-trips.
    const auto commented = RuleSetModel::parse("# baseline\n\nf0 >= 1\n", names);
    CHECK(commented.rules().size() == 1);
    const auto reparsed = RuleSetModel::parse(commented.to_text(), names);
    CHECK(reparsed.to_text() == commented.to_text());

    // The default rule set resolves against the real schema.
    const auto def = RuleSetModel::parse(default_rules_text(), datagen::feature_names());
    CHECK(def.rules().size() == 2);
}

TEST_CASE("evaluate on degenerate models") {
    const datagen::GenConfig gen = datagen::GenConfig{}.scaled(0.002);
    const auto bundle = datagen::generate_datasets(gen);

    // A rule that can never fire predicts OTHER for everything.
    TrainConfig cfg;
    cfg.rules_text = "age_norm > 99\n";
    const auto never = fit(ModelKind::rules, cfg, bundle.train);
    const auto [cm, metrics] = evaluate(*never, bundle.test);
    CHECK(cm.tp == 0);
    CHECK(cm.fp == 0);
    CHECK(metrics.f1 == 0.0);
    CHECK(metrics.gm == 0.0);

    // An oracle fed the label as a feature scores perfectly.
    auto oracle_ds = make_dataset({{1.0}, {0.0}, {1.0}, {0.0}, {0.0}}, {1, 0, 1, 0, 0});
    TrainConfig oracle_cfg;
    oracle_cfg.rules_text = "f0 >= 1\n";
    const auto oracle = fit(ModelKind::rules, oracle_cfg, oracle_ds);
    const auto [ocm, om] = evaluate(*oracle, oracle_ds);
    CHECK(om.precision == 1.0);
    CHECK(om.recall == 1.0);
    CHECK(om.f1 == 1.0);
    CHECK(om.gm == 1.0);
    CHECK(om.f1_gm == 1.0);

    datagen::LabeledDataset empty;
    empty.feature_names = oracle_ds.feature_names;
    CHECK_THROWS_AS(evaluate(*oracle, empty), DataError);
}

TEST_CASE("repeat_runs statistics") {
    const datagen::GenConfig gen = datagen::GenConfig{}.scaled(0.002);
    const auto bundle = datagen::generate_datasets(gen);
    TrainConfig cfg;

    // One run equals a single fit+evaluate with the derived seed.
    const auto one = repeat_runs(ModelKind::dt, cfg, bundle.train, bundle.test, 1);
    TrainConfig derived = cfg;
    derived.seed = mix_seeds(cfg.seed, 0);
    const auto direct = evaluate(*fit(ModelKind::dt, derived, bundle.train), bundle.test).second;
    CHECK(one.mean.f1 == direct.f1);
    CHECK(one.mean.gm == direct.gm);
    CHECK(one.stddev.f1 == 0.0);

    // Deterministic kinds show zero spread across runs.
    const auto rules_stats = repeat_runs(ModelKind::rules, cfg, bundle.train, bundle.test, 5);
    CHECK(rules_stats.stddev.f1 == 0.0);
    CHECK(rules_stats.stddev.gm == 0.0);
    CHECK(rules_stats.runs.size() == 5);

    CHECK_THROWS_AS(repeat_runs(ModelKind::dt, cfg, bundle.train, bundle.test, 0), ConfigError);
}

TEST_CASE("model files round-trip through json") {
    const datagen::GenConfig gen = datagen::GenConfig{}.scaled(0.002);
    const auto bundle = datagen::generate_datasets(gen);
    TrainConfig cfg;
    cfg.lr.epochs = 100;
    cfg.mlp.epochs = 5;
    cfg.rf.n_trees = 5;
    cfg.gbt.n_rounds = 10;

    const auto dir = std::filesystem::temp_directory_path() / "pairing_model_roundtrip";
    std::filesystem::create_directories(dir);
    for (ModelKind kind : {ModelKind::rules, ModelKind::lr, ModelKind::dt, ModelKind::rf,
                           ModelKind::gbt, ModelKind::mlp}) {
        const auto original = fit(kind, cfg, bundle.train);
        const auto path = (dir / (std::string(kind_name(kind)) + ".json")).string();
        save_model(*original, path);
        const auto loaded = load_model(path);
        CHECK(loaded->kind() == kind);
        CHECK(loaded->threshold() == original->threshold());
        CHECK(loaded->feature_names() == original->feature_names());
        for (std::size_t i = 0; i < bundle.test.records.size(); i += 13) {
            const auto& x = bundle.test.records[i].features;
            CHECK(loaded->predict_proba(x) == original->predict_proba(x));
        }
    }
    CHECK_THROWS_AS(load_model((dir / "missing.json").string()), DataError);
    std::filesystem::remove_all(dir);
}
