#pragma once

// Stage-wise gradient boosting with logistic loss on depth-limited
// regression trees: each round fits residuals, leaves take a damped Newton
// value, and the ensemble accumulates with shrinkage.

#include <span>
#include <vector>

#include "pairing/models.hpp"
#include "pairing/tree.hpp"

namespace pairing::models {

class GradientBoostedModel final : public Classifier {
public:
    GradientBoostedModel(double base_score, double shrinkage, std::vector<Tree> trees,
                         std::vector<std::string> feature_names, double threshold);

    double base_score() const { return base_score_; } // prior log-odds
    double shrinkage() const { return shrinkage_; }
    const std::vector<Tree>& trees() const { return trees_; }

    std::vector<double>& mutable_training_loss() { return training_loss_; }

protected:
    double score(std::span<const double> x) const override;

private:
    double base_score_ = 0.0;
    double shrinkage_ = 0.1;
    std::vector<Tree> trees_;
};

std::unique_ptr<Classifier> fit_gradient_boosted(const TrainConfig& cfg, const DenseData& data,
                                                 const std::vector<std::string>& feature_names);

} // namespace pairing::models
