#include "pairing/boosting.hpp"

#include <algorithm>
#include <cmath>

namespace pairing::models {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double bce_from_logit(double z, double y) {
    return std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
}

constexpr double kMaxLeafValue = 10.0;

} // namespace

GradientBoostedModel::GradientBoostedModel(double base_score, double shrinkage,
                                           std::vector<Tree> trees,
                                           std::vector<std::string> feature_names,
                                           double threshold)
    : Classifier(ModelKind::gbt, std::move(feature_names), threshold),
      base_score_(base_score),
      shrinkage_(shrinkage),
      trees_(std::move(trees)) {}

double GradientBoostedModel::score(std::span<const double> x) const {
    double logit = base_score_;
    for (const auto& tree : trees_) logit += shrinkage_ * tree.predict(x);
    return sigmoid(logit);
}

std::unique_ptr<Classifier> fit_gradient_boosted(const TrainConfig& cfg, const DenseData& data,
                                                 const std::vector<std::string>& feature_names) {
    DesignMatrix X(data.x, data.n, data.d);
    const std::vector<double> weights(data.n, 1.0);

    double positives = 0.0;
    for (double y : data.y) positives += y;
    const double prior = positives / data.n;
    const double base_score = std::log(prior / (1.0 - prior));

    std::vector<double> logit(data.n, base_score);
    std::vector<double> residual(data.n);
    std::vector<Tree> trees;
    trees.reserve(cfg.gbt.n_rounds);
    std::vector<double> loss_log;
    loss_log.reserve(cfg.gbt.n_rounds);

    TreeConfig tree_cfg;
    tree_cfg.max_depth = cfg.gbt.max_depth;
    tree_cfg.min_samples_leaf = 1;
    tree_cfg.regression = true;

    for (int round = 0; round < cfg.gbt.n_rounds; ++round) {
        for (int i = 0; i < data.n; ++i) residual[i] = data.y[i] - sigmoid(logit[i]);
        Tree tree = build_tree(X, residual, weights, tree_cfg);

        // One Newton step per leaf on the logistic loss.
        std::vector<double> num(tree.nodes.size(), 0.0);
        std::vector<double> den(tree.nodes.size(), 0.0);
        std::vector<int> leaf_of(data.n);
        for (int i = 0; i < data.n; ++i) {
            const int leaf = tree.leaf_for(X.row(i));
            leaf_of[i] = leaf;
            const double p = sigmoid(logit[i]);
            num[leaf] += residual[i];
            den[leaf] += p * (1.0 - p);
        }
        for (std::size_t node = 0; node < tree.nodes.size(); ++node) {
            if (tree.nodes[node].feature >= 0) continue;
            const double v = num[node] / std::max(den[node], 1e-12);
            tree.nodes[node].value = std::clamp(v, -kMaxLeafValue, kMaxLeafValue);
        }

        double loss = 0.0;
        for (int i = 0; i < data.n; ++i) {
            logit[i] += cfg.gbt.shrinkage * tree.nodes[leaf_of[i]].value;
            loss += bce_from_logit(logit[i], data.y[i]);
        }
        loss_log.push_back(loss / data.n);
        trees.push_back(std::move(tree));
    }

    auto model = std::make_unique<GradientBoostedModel>(base_score, cfg.gbt.shrinkage,
                                                        std::move(trees), feature_names,
                                                        cfg.threshold);
    model->mutable_training_loss() = std::move(loss_log);
    return model;
}

} // namespace pairing::models
