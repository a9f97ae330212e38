#pragma once

// Decision tree and bagged random forest over the shared tree builder.

#include <span>
#include <vector>

#include "pairing/models.hpp"
#include "pairing/tree.hpp"

namespace pairing::models {

class DecisionTreeModel final : public Classifier {
public:
    DecisionTreeModel(Tree tree, std::vector<std::string> feature_names, double threshold);

    const Tree& tree() const { return tree_; }

protected:
    double score(std::span<const double> x) const override;

private:
    Tree tree_;
};

class RandomForestModel final : public Classifier {
public:
    RandomForestModel(std::vector<Tree> trees, std::vector<std::string> feature_names,
                      double threshold);

    const std::vector<Tree>& trees() const { return trees_; }

protected:
    double score(std::span<const double> x) const override; // mean of tree leaf fractions

private:
    std::vector<Tree> trees_;
};

std::unique_ptr<Classifier> fit_decision_tree(const TrainConfig& cfg, const DenseData& data,
                                              const std::vector<std::string>& feature_names);

std::unique_ptr<Classifier> fit_random_forest(const TrainConfig& cfg, const DenseData& data,
                                              const std::vector<std::string>& feature_names);

} // namespace pairing::models
