#pragma once

// Logistic regression trained by full-batch gradient descent with L2
// regularization on standardized features.

#include <span>
#include <vector>

#include "pairing/models.hpp"

namespace pairing::models {

class LogisticModel final : public Classifier {
public:
    LogisticModel(std::vector<double> weights, double bias, FeatureScaler scaler,
                  std::vector<std::string> feature_names, double threshold);

    const std::vector<double>& weights() const { return weights_; }
    double bias() const { return bias_; }
    const FeatureScaler& scaler() const { return scaler_; }

    std::vector<double>& mutable_training_loss() { return training_loss_; }

protected:
    double score(std::span<const double> x) const override;

private:
    std::vector<double> weights_;
    double bias_ = 0.0;
    FeatureScaler scaler_;
};

// Mean cross-entropy over the batch plus (l2/2)*||w||^2 (bias unregularized),
// with its analytic gradient. params = [w_0..w_{d-1}, bias]. Exposed so the
// gradient can be checked against finite differences.
double lr_loss_and_gradient(const DenseData& data, std::span<const double> params, double l2,
                            std::span<double> grad_out);

std::unique_ptr<Classifier> fit_logistic(const TrainConfig& cfg, const DenseData& data,
                                         const std::vector<std::string>& feature_names);

} // namespace pairing::models
