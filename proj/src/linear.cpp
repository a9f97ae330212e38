#include "pairing/linear.hpp"

#include <cmath>

namespace pairing::models {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Numerically stable -[y log p + (1-y) log(1-p)] for logit z.
double bce_from_logit(double z, double y) {
    return std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
}

} // namespace

LogisticModel::LogisticModel(std::vector<double> weights, double bias, FeatureScaler scaler,
                             std::vector<std::string> feature_names, double threshold)
    : Classifier(ModelKind::lr, std::move(feature_names), threshold),
      weights_(std::move(weights)),
      bias_(bias),
      scaler_(std::move(scaler)) {}

double LogisticModel::score(std::span<const double> x) const {
    const std::vector<double> z = scaler_.apply(x);
    double logit = bias_;
    for (std::size_t j = 0; j < z.size(); ++j) logit += weights_[j] * z[j];
    return sigmoid(logit);
}

double lr_loss_and_gradient(const DenseData& data, std::span<const double> params, double l2,
                            std::span<double> grad_out) {
    const int n = data.n, d = data.d;
    if (params.size() != static_cast<std::size_t>(d) + 1 || grad_out.size() != params.size())
        throw DataError("lr_loss_and_gradient: parameter size mismatch");

    std::fill(grad_out.begin(), grad_out.end(), 0.0);
    double loss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double* row = data.x.data() + static_cast<std::size_t>(i) * d;
        double z = params[d];
        for (int j = 0; j < d; ++j) z += params[j] * row[j];
        loss += bce_from_logit(z, data.y[i]);
        const double err = sigmoid(z) - data.y[i];
        for (int j = 0; j < d; ++j) grad_out[j] += err * row[j];
        grad_out[d] += err;
    }
    const double inv_n = 1.0 / n;
    loss *= inv_n;
    for (auto& g : grad_out) g *= inv_n;
    for (int j = 0; j < d; ++j) { // bias stays unregularized
        loss += 0.5 * l2 * params[j] * params[j];
        grad_out[j] += l2 * params[j];
    }
    return loss;
}

std::unique_ptr<Classifier> fit_logistic(const TrainConfig& cfg, const DenseData& data,
                                         const std::vector<std::string>& feature_names) {
    const FeatureScaler scaler = FeatureScaler::fit(data);
    const DenseData scaled = scaler.apply_all(data);

    std::vector<double> params(data.d + 1, 0.0);
    std::vector<double> grad(params.size(), 0.0);
    std::vector<double> loss_log;
    loss_log.reserve(cfg.lr.epochs);
    for (int epoch = 0; epoch < cfg.lr.epochs; ++epoch) {
        const double loss = lr_loss_and_gradient(scaled, params, cfg.lr.l2, grad);
        loss_log.push_back(loss);
        for (std::size_t j = 0; j < params.size(); ++j)
            params[j] -= cfg.lr.learning_rate * grad[j];
    }

    std::vector<double> weights(params.begin(), params.begin() + data.d);
    auto model = std::make_unique<LogisticModel>(std::move(weights), params[data.d], scaler,
                                                 feature_names, cfg.threshold);
    model->mutable_training_loss() = std::move(loss_log);
    return model;
}

} // namespace pairing::models
