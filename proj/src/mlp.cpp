#include "pairing/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pairing/rng.hpp"

namespace pairing::models {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double bce_from_logit(double z, double y) {
    return std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
}

// Offsets of each layer's weight block; biases follow the weights.
struct Layout {
    std::vector<int> w_off;
    std::vector<int> b_off;
    int total = 0;

    explicit Layout(const MlpTopology& t) {
        const int n_layers = static_cast<int>(t.sizes.size()) - 1;
        w_off.resize(n_layers);
        b_off.resize(n_layers);
        int off = 0;
        for (int l = 0; l < n_layers; ++l) {
            w_off[l] = off;
            off += t.sizes[l + 1] * t.sizes[l];
            b_off[l] = off;
            off += t.sizes[l + 1];
        }
        total = off;
    }
};

// Activations for one sample, kept for the backward pass.
struct Workspace {
    std::vector<std::vector<double>> act;   // act[0] = input, act[L] = logit
    std::vector<std::vector<double>> delta; // same shapes as act[1..]

    explicit Workspace(const MlpTopology& t) {
        act.resize(t.sizes.size());
        delta.resize(t.sizes.size());
        for (std::size_t l = 0; l < t.sizes.size(); ++l) {
            act[l].assign(t.sizes[l], 0.0);
            delta[l].assign(t.sizes[l], 0.0);
        }
    }
};

// Forward through all layers; hidden activations tanh, output raw logit.
double forward(const MlpTopology& t, const Layout& layout, std::span<const double> params,
               std::span<const double> x, Workspace& ws) {
    std::copy(x.begin(), x.end(), ws.act[0].begin());
    const int n_layers = static_cast<int>(t.sizes.size()) - 1;
    for (int l = 0; l < n_layers; ++l) {
        const int in = t.sizes[l], out = t.sizes[l + 1];
        const double* w = params.data() + layout.w_off[l];
        const double* b = params.data() + layout.b_off[l];
        for (int o = 0; o < out; ++o) {
            double z = b[o];
            const double* w_row = w + static_cast<std::size_t>(o) * in;
            for (int i = 0; i < in; ++i) z += w_row[i] * ws.act[l][i];
            ws.act[l + 1][o] = l + 1 == n_layers ? z : std::tanh(z);
        }
    }
    return ws.act[n_layers][0];
}

// Backward pass for one sample; accumulates parameter gradients.
void backward(const MlpTopology& t, const Layout& layout, std::span<const double> params,
              double output_error, Workspace& ws, std::span<double> grad) {
    const int n_layers = static_cast<int>(t.sizes.size()) - 1;
    ws.delta[n_layers][0] = output_error;
    for (int l = n_layers - 1; l >= 0; --l) {
        const int in = t.sizes[l], out = t.sizes[l + 1];
        const double* w = params.data() + layout.w_off[l];
        double* gw = grad.data() + layout.w_off[l];
        double* gb = grad.data() + layout.b_off[l];
        for (int o = 0; o < out; ++o) {
            const double d = ws.delta[l + 1][o];
            gb[o] += d;
            double* gw_row = gw + static_cast<std::size_t>(o) * in;
            for (int i = 0; i < in; ++i) gw_row[i] += d * ws.act[l][i];
        }
        if (l == 0) break;
        for (int i = 0; i < in; ++i) {
            double sum = 0.0;
            for (int o = 0; o < out; ++o)
                sum += ws.delta[l + 1][o] * w[static_cast<std::size_t>(o) * in + i];
            const double a = ws.act[l][i];
            ws.delta[l][i] = sum * (1.0 - a * a); // tanh'
        }
    }
}

} // namespace

int MlpTopology::n_params() const { return Layout(*this).total; }

MlpTopology MlpTopology::make(int input_dim, const std::vector<int>& hidden_sizes) {
    MlpTopology t;
    t.sizes.push_back(input_dim);
    for (int h : hidden_sizes) t.sizes.push_back(h);
    t.sizes.push_back(1);
    return t;
}

MlpModel::MlpModel(MlpTopology topology, std::vector<double> params, FeatureScaler scaler,
                   std::vector<std::string> feature_names, double threshold)
    : Classifier(ModelKind::mlp, std::move(feature_names), threshold),
      topology_(std::move(topology)),
      params_(std::move(params)),
      scaler_(std::move(scaler)) {
    if (params_.size() != static_cast<std::size_t>(topology_.n_params()))
        throw ConfigError("mlp parameter vector does not match the topology");
}

double MlpModel::score(std::span<const double> x) const {
    const std::vector<double> z = scaler_.apply(x);
    return sigmoid(mlp_forward(topology_, params_, z));
}

double mlp_forward(const MlpTopology& topology, std::span<const double> params,
                   std::span<const double> x) {
    const Layout layout(topology);
    Workspace ws(topology);
    return forward(topology, layout, params, x, ws);
}

double mlp_loss_and_gradient(const MlpTopology& topology, std::span<const double> params,
                             const DenseData& data, std::span<double> grad_out) {
    const Layout layout(topology);
    if (params.size() != static_cast<std::size_t>(layout.total) ||
        grad_out.size() != params.size())
        throw DataError("mlp_loss_and_gradient: parameter size mismatch");
    if (data.d != topology.sizes.front())
        throw DataError("mlp_loss_and_gradient: data does not match topology");

    Workspace ws(topology);
    std::fill(grad_out.begin(), grad_out.end(), 0.0);
    double loss = 0.0;
    for (int i = 0; i < data.n; ++i) {
        const std::span<const double> row{data.x.data() + static_cast<std::size_t>(i) * data.d,
                                          static_cast<std::size_t>(data.d)};
        const double z = forward(topology, layout, params, row, ws);
        loss += bce_from_logit(z, data.y[i]);
        backward(topology, layout, params, sigmoid(z) - data.y[i], ws, grad_out);
    }
    const double inv_n = 1.0 / data.n;
    loss *= inv_n;
    for (auto& g : grad_out) g *= inv_n;
    return loss;
}

std::unique_ptr<Classifier> fit_mlp(const TrainConfig& cfg, const DenseData& data,
                                    const std::vector<std::string>& feature_names) {
    const FeatureScaler scaler = FeatureScaler::fit(data);
    const DenseData scaled = scaler.apply_all(data);
    const MlpTopology topology = MlpTopology::make(data.d, cfg.mlp.hidden_sizes);
    const Layout layout(topology);

    Rng rng(mix_seeds(cfg.seed, 0x6d6c70ULL)); // "mlp" stream
    std::vector<double> params(layout.total);
    const int n_layers = static_cast<int>(topology.sizes.size()) - 1;
    for (int l = 0; l < n_layers; ++l) {
        const int in = topology.sizes[l], out = topology.sizes[l + 1];
        const double r = std::sqrt(6.0 / (in + out));
        for (int k = 0; k < out * in; ++k) params[layout.w_off[l] + k] = rng.uniform(-r, r);
        // biases start at zero
    }

    Workspace ws(topology);
    std::vector<double> grad(params.size());
    std::vector<int> perm(scaled.n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<double> loss_log;
    loss_log.reserve(cfg.mlp.epochs);

    for (int epoch = 0; epoch < cfg.mlp.epochs; ++epoch) {
        // Seeded Fisher-Yates shuffle per epoch.
        for (int i = scaled.n - 1; i > 0; --i)
            std::swap(perm[i], perm[rng.uniform_int(static_cast<std::uint64_t>(i) + 1)]);

        double epoch_loss = 0.0;
        for (int begin = 0; begin < scaled.n; begin += cfg.mlp.batch_size) {
            const int end = std::min(begin + cfg.mlp.batch_size, scaled.n);
            std::fill(grad.begin(), grad.end(), 0.0);
            for (int k = begin; k < end; ++k) {
                const int i = perm[k];
                const std::span<const double> row{
                    scaled.x.data() + static_cast<std::size_t>(i) * scaled.d,
                    static_cast<std::size_t>(scaled.d)};
                const double z = forward(topology, layout, params, row, ws);
                epoch_loss += bce_from_logit(z, scaled.y[i]);
                backward(topology, layout, params, sigmoid(z) - scaled.y[i], ws, grad);
            }
            const double step = cfg.mlp.learning_rate / (end - begin);
            for (std::size_t j = 0; j < params.size(); ++j) params[j] -= step * grad[j];
        }
        loss_log.push_back(epoch_loss / scaled.n);
    }

    auto model = std::make_unique<MlpModel>(topology, std::move(params), scaler, feature_names,
                                            cfg.threshold);
    model->mutable_training_loss() = std::move(loss_log);
    return model;
}

} // namespace pairing::models
