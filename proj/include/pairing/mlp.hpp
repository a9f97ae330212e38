#pragma once

// Feed-forward network with tanh hidden layers and a sigmoid output, trained
// by minibatch SGD on cross-entropy loss via backpropagation.

#include <span>
#include <vector>

#include "pairing/models.hpp"

namespace pairing::models {

// Fully-connected layer sizes, input first, 1 output logit last.
struct MlpTopology {
    std::vector<int> sizes;

    int n_params() const;
    static MlpTopology make(int input_dim, const std::vector<int>& hidden_sizes);
};

class MlpModel final : public Classifier {
public:
    MlpModel(MlpTopology topology, std::vector<double> params, FeatureScaler scaler,
             std::vector<std::string> feature_names, double threshold);

    const MlpTopology& topology() const { return topology_; }
    const std::vector<double>& params() const { return params_; }
    const FeatureScaler& scaler() const { return scaler_; }

    std::vector<double>& mutable_training_loss() { return training_loss_; }

protected:
    double score(std::span<const double> x) const override;

private:
    MlpTopology topology_;
    std::vector<double> params_;
    FeatureScaler scaler_;
};

// Forward pass on one standardized input; params laid out layer by layer as
// weights (row-major out x in) followed by biases.
double mlp_forward(const MlpTopology& topology, std::span<const double> params,
                   std::span<const double> x);

// Mean cross-entropy over the batch with the full analytic gradient;
// exposed for the finite-difference gradient check.
double mlp_loss_and_gradient(const MlpTopology& topology, std::span<const double> params,
                             const DenseData& data, std::span<double> grad_out);

std::unique_ptr<Classifier> fit_mlp(const TrainConfig& cfg, const DenseData& data,
                                    const std::vector<std::string>& feature_names);

} // namespace pairing::models
