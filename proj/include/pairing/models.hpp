#pragma once

// The classifier roster behind one train/predict interface: rule-based
// baseline, logistic regression, decision tree, random forest, gradient
// boosted trees, and a multilayer perceptron.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pairing/datagen.hpp"
#include "pairing/domain.hpp"

namespace pairing::models {

enum class ModelKind { rules, lr, dt, rf, gbt, mlp };

const char* kind_name(ModelKind kind);
ModelKind kind_from_name(const std::string& name); // ConfigError on unknown names

struct LrParams {
    double learning_rate = 0.5;
    int epochs = 2000;
    double l2 = 1e-4;
};

struct DtParams {
    int max_depth = 8;
    int min_samples_leaf = 20;
};

struct RfParams {
    int n_trees = 100;
    double feature_fraction = 0.0; // 0 = sqrt(d) features per split
    bool bootstrap = true;
    // Forest trees grow deeper and purer than the single pruned tree.
    int max_depth = 16;
    int min_samples_leaf = 1;
};

struct GbtParams {
    int n_rounds = 200;
    double shrinkage = 0.1;
    int max_depth = 3;
};

struct MlpParams {
    std::vector<int> hidden_sizes = {64};
    double learning_rate = 0.05;
    int epochs = 150;
    int batch_size = 128;
};

struct TrainConfig {
    LrParams lr;
    DtParams dt;
    RfParams rf;
    GbtParams gbt;
    MlpParams mlp;
    std::string rules_text; // empty = the default rule set
    double threshold = 0.5;
    std::uint64_t seed = 1;

    void validate() const; // ConfigError on violation
};

class Classifier {
public:
    virtual ~Classifier() = default;

    ModelKind kind() const { return kind_; }
    double threshold() const { return threshold_; }
    void set_threshold(double t);
    const std::vector<std::string>& feature_names() const { return feature_names_; }
    int dimension() const { return static_cast<int>(feature_names_.size()); }

    // Probability of SERVICE_A; rejects vectors of the wrong dimensionality.
    double predict_proba(std::span<const double> x) const;
    // SERVICE_A iff predict_proba >= threshold (ties resolve positive).
    Label predict(std::span<const double> x) const;

    // Per-epoch/round training loss where the kind logs one.
    const std::vector<double>& training_loss() const { return training_loss_; }

protected:
    Classifier(ModelKind kind, std::vector<std::string> names, double threshold);
    virtual double score(std::span<const double> x) const = 0;

    std::vector<double> training_loss_;

private:
    ModelKind kind_;
    std::vector<std::string> feature_names_;
    double threshold_ = 0.5;
};

// Dense view of a labeled dataset: row-major features, 0/1 targets.
struct DenseData {
    int n = 0;
    int d = 0;
    std::vector<double> x;
    std::vector<double> y;
};

// Validates shape and finiteness; requires non-empty data.
DenseData to_dense(const datagen::LabeledDataset& data);

// Z-score scaling fitted on training data, applied at predict time by the
// models whose optimization cares about feature scale (lr, mlp).
struct FeatureScaler {
    std::vector<double> mean;
    std::vector<double> stddev;

    static FeatureScaler fit(const DenseData& data);
    std::vector<double> apply(std::span<const double> x) const;
    DenseData apply_all(const DenseData& data) const;
};

// Deterministic given cfg.seed. Requires both classes present and finite
// features; per-kind hyperparameters come from the matching cfg section.
std::unique_ptr<Classifier> fit(ModelKind kind, const TrainConfig& cfg,
                                const datagen::LabeledDataset& data);

std::pair<ConfusionCounts, MetricsReport> evaluate(const Classifier& model,
                                                   const datagen::LabeledDataset& data);

struct RepeatStats {
    MetricsReport mean;
    MetricsReport stddev; // sample standard deviation (0 for n_runs = 1)
    std::vector<MetricsReport> runs;
};

// Re-trains n_runs times with per-run seeds derived from cfg.seed and
// evaluates each trained model on eval_data.
RepeatStats repeat_runs(ModelKind kind, const TrainConfig& cfg,
                        const datagen::LabeledDataset& train_data,
                        const datagen::LabeledDataset& eval_data, int n_runs);

// Self-describing JSON model files.
std::string model_to_json_string(const Classifier& model);
void save_model(const Classifier& model, const std::string& path);
std::unique_ptr<Classifier> load_model(const std::string& path);

} // namespace pairing::models
