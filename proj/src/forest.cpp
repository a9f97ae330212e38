#include "pairing/forest.hpp"

#include <cmath>

#include "pairing/rng.hpp"

namespace pairing::models {

DecisionTreeModel::DecisionTreeModel(Tree tree, std::vector<std::string> feature_names,
                                     double threshold)
    : Classifier(ModelKind::dt, std::move(feature_names), threshold), tree_(std::move(tree)) {}

double DecisionTreeModel::score(std::span<const double> x) const { return tree_.predict(x); }

RandomForestModel::RandomForestModel(std::vector<Tree> trees,
                                     std::vector<std::string> feature_names, double threshold)
    : Classifier(ModelKind::rf, std::move(feature_names), threshold), trees_(std::move(trees)) {
    if (trees_.empty()) throw ConfigError("random forest needs at least one tree");
}

double RandomForestModel::score(std::span<const double> x) const {
    double sum = 0.0;
    for (const auto& tree : trees_) sum += tree.predict(x);
    return sum / static_cast<double>(trees_.size());
}

std::unique_ptr<Classifier> fit_decision_tree(const TrainConfig& cfg, const DenseData& data,
                                              const std::vector<std::string>& feature_names) {
    DesignMatrix X(data.x, data.n, data.d);
    const std::vector<double> weights(data.n, 1.0);
    TreeConfig tree_cfg;
    tree_cfg.max_depth = cfg.dt.max_depth;
    tree_cfg.min_samples_leaf = cfg.dt.min_samples_leaf;
    Tree tree = build_tree(X, data.y, weights, tree_cfg);
    return std::make_unique<DecisionTreeModel>(std::move(tree), feature_names, cfg.threshold);
}

std::unique_ptr<Classifier> fit_random_forest(const TrainConfig& cfg, const DenseData& data,
                                              const std::vector<std::string>& feature_names) {
    DesignMatrix X(data.x, data.n, data.d);
    const Rng base(mix_seeds(cfg.seed, 0x666f72657374ULL)); // "forest" stream

    int candidates;
    if (cfg.rf.feature_fraction <= 0.0)
        candidates = std::max(1, static_cast<int>(std::lround(std::sqrt(data.d))));
    else
        candidates = std::max(1, static_cast<int>(std::lround(cfg.rf.feature_fraction * data.d)));

    std::vector<Tree> trees;
    trees.reserve(cfg.rf.n_trees);
    std::vector<double> weights(data.n, 1.0);
    for (int t = 0; t < cfg.rf.n_trees; ++t) {
        Rng rng = base.fork(t);
        if (cfg.rf.bootstrap) {
            std::fill(weights.begin(), weights.end(), 0.0);
            for (int i = 0; i < data.n; ++i)
                weights[rng.uniform_int(data.n)] += 1.0;
        }
        TreeConfig tree_cfg;
        tree_cfg.max_depth = cfg.rf.max_depth;
        tree_cfg.min_samples_leaf = cfg.rf.min_samples_leaf;
        tree_cfg.n_candidate_features = candidates >= data.d ? 0 : candidates;
        tree_cfg.seed = rng.next_u64();
        trees.push_back(build_tree(X, data.y, weights, tree_cfg));
    }
    return std::make_unique<RandomForestModel>(std::move(trees), feature_names, cfg.threshold);
}

} // namespace pairing::models
