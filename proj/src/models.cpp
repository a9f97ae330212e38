#include "pairing/models.hpp"

#include <cmath>

#include "pairing/boosting.hpp"
#include "pairing/forest.hpp"
#include "pairing/linear.hpp"
#include "pairing/mlp.hpp"
#include "pairing/rng.hpp"
#include "pairing/rules.hpp"

namespace pairing::models {

const char* kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::rules: return "rules";
        case ModelKind::lr: return "lr";
        case ModelKind::dt: return "dt";
        case ModelKind::rf: return "rf";
        case ModelKind::gbt: return "gbt";
        case ModelKind::mlp: return "mlp";
    }
    return "?";
}

ModelKind kind_from_name(const std::string& name) {
    for (ModelKind k : {ModelKind::rules, ModelKind::lr, ModelKind::dt, ModelKind::rf,
                        ModelKind::gbt, ModelKind::mlp})
        if (name == kind_name(k)) return k;
    throw ConfigError("unknown model kind: '" + name + "'");
}

void TrainConfig::validate() const {
    if (!(lr.learning_rate > 0.0) || lr.epochs < 1 || lr.l2 < 0.0)
        throw ConfigError("invalid logistic-regression hyperparameters");
    if (dt.max_depth < 1 || dt.min_samples_leaf < 1)
        throw ConfigError("invalid decision-tree hyperparameters");
    if (rf.n_trees < 1 || rf.feature_fraction < 0.0 || rf.feature_fraction > 1.0 ||
        rf.max_depth < 1 || rf.min_samples_leaf < 1)
        throw ConfigError("invalid random-forest hyperparameters");
    if (gbt.n_rounds < 1 || !(gbt.shrinkage > 0.0 && gbt.shrinkage <= 1.0) || gbt.max_depth < 1)
        throw ConfigError("invalid boosting hyperparameters");
    if (mlp.hidden_sizes.empty() || !(mlp.learning_rate > 0.0) || mlp.epochs < 1 ||
        mlp.batch_size < 1)
        throw ConfigError("invalid mlp hyperparameters");
    for (int h : mlp.hidden_sizes)
        if (h < 1) throw ConfigError("mlp hidden layer sizes must be positive");
    if (!(threshold > 0.0 && threshold < 1.0))
        throw ConfigError("decision threshold must lie in (0, 1)");
}

Classifier::Classifier(ModelKind kind, std::vector<std::string> names, double threshold)
    : kind_(kind), feature_names_(std::move(names)) {
    set_threshold(threshold);
}

void Classifier::set_threshold(double t) {
    if (!(t > 0.0 && t < 1.0)) throw ConfigError("decision threshold must lie in (0, 1)");
    threshold_ = t;
}

double Classifier::predict_proba(std::span<const double> x) const {
    if (x.size() != feature_names_.size())
        throw DataError("predict: feature vector has wrong dimensionality");
    const double p = score(x);
    return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p);
}

Label Classifier::predict(std::span<const double> x) const {
    return predict_proba(x) >= threshold_ ? Label::service_a() : Label::other();
}

DenseData to_dense(const datagen::LabeledDataset& data) {
    if (data.records.empty()) throw DataError("dataset is empty");
    DenseData out;
    out.n = static_cast<int>(data.records.size());
    out.d = static_cast<int>(data.feature_names.size());
    out.x.reserve(static_cast<std::size_t>(out.n) * out.d);
    out.y.reserve(out.n);
    for (const auto& rec : data.records) {
        if (rec.features.size() != static_cast<std::size_t>(out.d))
            throw DataError("record feature vector does not match the schema");
        for (double v : rec.features) {
            if (!std::isfinite(v)) throw DataError("non-finite feature value in dataset");
            out.x.push_back(v);
        }
        out.y.push_back(rec.true_label.positive() ? 1.0 : 0.0);
    }
    return out;
}

FeatureScaler FeatureScaler::fit(const DenseData& data) {
    FeatureScaler s;
    s.mean.assign(data.d, 0.0);
    s.stddev.assign(data.d, 1.0);
    for (int i = 0; i < data.n; ++i)
        for (int j = 0; j < data.d; ++j) s.mean[j] += data.x[static_cast<std::size_t>(i) * data.d + j];
    for (double& m : s.mean) m /= data.n;
    std::vector<double> var(data.d, 0.0);
    for (int i = 0; i < data.n; ++i)
        for (int j = 0; j < data.d; ++j) {
            const double delta = data.x[static_cast<std::size_t>(i) * data.d + j] - s.mean[j];
            var[j] += delta * delta;
        }
    for (int j = 0; j < data.d; ++j) {
        const double sd = std::sqrt(var[j] / data.n);
        s.stddev[j] = sd > 1e-12 ? sd : 1.0; // constant columns pass through
    }
    return s;
}

std::vector<double> FeatureScaler::apply(std::span<const double> x) const {
    std::vector<double> z(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) z[j] = (x[j] - mean[j]) / stddev[j];
    return z;
}

DenseData FeatureScaler::apply_all(const DenseData& data) const {
    DenseData out = data;
    for (int i = 0; i < data.n; ++i)
        for (int j = 0; j < data.d; ++j) {
            auto& v = out.x[static_cast<std::size_t>(i) * data.d + j];
            v = (v - mean[j]) / stddev[j];
        }
    return out;
}

std::unique_ptr<Classifier> fit(ModelKind kind, const TrainConfig& cfg,
                                const datagen::LabeledDataset& data) {
    cfg.validate();
    if (kind == ModelKind::rules) {
        // Rules are configured, not learned; no class-balance requirement.
        const std::string& text = cfg.rules_text.empty() ? default_rules_text() : cfg.rules_text;
        return std::make_unique<RuleSetModel>(
            RuleSetModel::parse(text, data.feature_names, cfg.threshold));
    }

    const DenseData dense = to_dense(data);
    bool has_pos = false, has_neg = false;
    for (double v : dense.y) (v > 0.5 ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg)
        throw DataError("training data must contain both classes");

    switch (kind) {
        case ModelKind::lr: return fit_logistic(cfg, dense, data.feature_names);
        case ModelKind::dt: return fit_decision_tree(cfg, dense, data.feature_names);
        case ModelKind::rf: return fit_random_forest(cfg, dense, data.feature_names);
        case ModelKind::gbt: return fit_gradient_boosted(cfg, dense, data.feature_names);
        case ModelKind::mlp: return fit_mlp(cfg, dense, data.feature_names);
        case ModelKind::rules: break;
    }
    throw ConfigError("unreachable model kind");
}

std::pair<ConfusionCounts, MetricsReport> evaluate(const Classifier& model,
                                                   const datagen::LabeledDataset& data) {
    if (data.records.empty()) throw DataError("evaluate: dataset is empty");
    ConfusionCounts cm;
    for (const auto& rec : data.records) {
        const Label predicted = model.predict(rec.features);
        if (predicted.positive())
            rec.true_label.positive() ? ++cm.tp : ++cm.fp;
        else
            rec.true_label.positive() ? ++cm.fn : ++cm.tn;
    }
    return {cm, compute_metrics(cm)};
}

namespace {

// Applies fn to the matching field of every report in the pack.
template <typename Fn>
void for_each_metric(Fn fn) {
    fn(&MetricsReport::precision);
    fn(&MetricsReport::recall);
    fn(&MetricsReport::specificity);
    fn(&MetricsReport::f1);
    fn(&MetricsReport::gm);
    fn(&MetricsReport::f1_gm);
}

} // namespace

RepeatStats repeat_runs(ModelKind kind, const TrainConfig& cfg,
                        const datagen::LabeledDataset& train_data,
                        const datagen::LabeledDataset& eval_data, int n_runs) {
    if (n_runs < 1) throw ConfigError("repeat_runs: n_runs must be positive");
    RepeatStats stats;
    stats.runs.reserve(n_runs);
    for (int run = 0; run < n_runs; ++run) {
        TrainConfig run_cfg = cfg;
        run_cfg.seed = mix_seeds(cfg.seed, static_cast<std::uint64_t>(run));
        const auto model = fit(kind, run_cfg, train_data);
        stats.runs.push_back(evaluate(*model, eval_data).second);
    }
    for_each_metric([&](double MetricsReport::*field) {
        double sum = 0.0, lo = stats.runs[0].*field, hi = lo;
        for (const auto& r : stats.runs) {
            sum += r.*field;
            lo = std::min(lo, r.*field);
            hi = std::max(hi, r.*field);
        }
        const double mean = sum / n_runs;
        stats.mean.*field = mean;
        if (n_runs == 1 || lo == hi) return; // identical runs: exactly zero spread
        double sq = 0.0;
        for (const auto& r : stats.runs) sq += (r.*field - mean) * (r.*field - mean);
        stats.stddev.*field = std::sqrt(sq / (n_runs - 1));
    });
    return stats;
}

} // namespace pairing::models
