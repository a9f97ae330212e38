// JSON persistence for trained models: kind, hyperparameters, learned
// parameters, feature names, and decision threshold.

#include <json.hpp>

#include "pairing/boosting.hpp"
#include "pairing/forest.hpp"
#include "pairing/linear.hpp"
#include "pairing/mlp.hpp"
#include "pairing/models.hpp"
#include "pairing/rules.hpp"
#include "pairing/textio.hpp"

namespace pairing::models {

using nlohmann::json;

namespace {

json tree_to_json(const Tree& tree) {
    json nodes = json::array();
    for (const auto& n : tree.nodes)
        nodes.push_back({n.feature, n.threshold, n.left, n.right, n.value});
    return nodes;
}

Tree tree_from_json(const json& nodes) {
    Tree tree;
    tree.nodes.reserve(nodes.size());
    for (const auto& n : nodes) {
        TreeNode node;
        node.feature = n.at(0).get<int>();
        node.threshold = n.at(1).get<double>();
        node.left = n.at(2).get<int>();
        node.right = n.at(3).get<int>();
        node.value = n.at(4).get<double>();
        tree.nodes.push_back(node);
    }
    return tree;
}

json scaler_to_json(const FeatureScaler& s) {
    return {{"mean", s.mean}, {"stddev", s.stddev}};
}

FeatureScaler scaler_from_json(const json& j) {
    FeatureScaler s;
    s.mean = j.at("mean").get<std::vector<double>>();
    s.stddev = j.at("stddev").get<std::vector<double>>();
    return s;
}

} // namespace

std::string model_to_json_string(const Classifier& model) {
    json j;
    j["kind"] = kind_name(model.kind());
    j["threshold"] = model.threshold();
    j["feature_names"] = model.feature_names();
    j["training_loss"] = model.training_loss();

    json params, hyper;
    switch (model.kind()) {
        case ModelKind::rules: {
            const auto& m = dynamic_cast<const RuleSetModel&>(model);
            params["rules_text"] = m.to_text();
            hyper["n_rules"] = m.rules().size();
            break;
        }
        case ModelKind::lr: {
            const auto& m = dynamic_cast<const LogisticModel&>(model);
            params["weights"] = m.weights();
            params["bias"] = m.bias();
            params["scaler"] = scaler_to_json(m.scaler());
            hyper["epochs"] = m.training_loss().size();
            break;
        }
        case ModelKind::dt: {
            const auto& m = dynamic_cast<const DecisionTreeModel&>(model);
            params["tree"] = tree_to_json(m.tree());
            hyper["n_nodes"] = m.tree().nodes.size();
            break;
        }
        case ModelKind::rf: {
            const auto& m = dynamic_cast<const RandomForestModel&>(model);
            json trees = json::array();
            for (const auto& t : m.trees()) trees.push_back(tree_to_json(t));
            params["trees"] = std::move(trees);
            hyper["n_trees"] = m.trees().size();
            break;
        }
        case ModelKind::gbt: {
            const auto& m = dynamic_cast<const GradientBoostedModel&>(model);
            json trees = json::array();
            for (const auto& t : m.trees()) trees.push_back(tree_to_json(t));
            params["base_score"] = m.base_score();
            params["shrinkage"] = m.shrinkage();
            params["trees"] = std::move(trees);
            hyper["n_rounds"] = m.trees().size();
            hyper["shrinkage"] = m.shrinkage();
            break;
        }
        case ModelKind::mlp: {
            const auto& m = dynamic_cast<const MlpModel&>(model);
            params["sizes"] = m.topology().sizes;
            params["params"] = m.params();
            params["scaler"] = scaler_to_json(m.scaler());
            hyper["layer_sizes"] = m.topology().sizes;
            break;
        }
    }
    j["params"] = std::move(params);
    j["hyperparameters"] = std::move(hyper);
    return j.dump(2) + "\n";
}

void save_model(const Classifier& model, const std::string& path) {
    write_file_atomic(path, model_to_json_string(model));
}

std::unique_ptr<Classifier> load_model(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw DataError("malformed model file " + path + ": " + e.what());
    }

    const ModelKind kind = kind_from_name(j.at("kind").get<std::string>());
    const double threshold = j.at("threshold").get<double>();
    auto names = j.at("feature_names").get<std::vector<std::string>>();
    const json& params = j.at("params");

    std::unique_ptr<Classifier> model;
    switch (kind) {
        case ModelKind::rules:
            model = std::make_unique<RuleSetModel>(
                RuleSetModel::parse(params.at("rules_text").get<std::string>(), names, threshold));
            break;
        case ModelKind::lr:
            model = std::make_unique<LogisticModel>(
                params.at("weights").get<std::vector<double>>(), params.at("bias").get<double>(),
                scaler_from_json(params.at("scaler")), names, threshold);
            break;
        case ModelKind::dt:
            model = std::make_unique<DecisionTreeModel>(tree_from_json(params.at("tree")), names,
                                                        threshold);
            break;
        case ModelKind::rf: {
            std::vector<Tree> trees;
            for (const auto& t : params.at("trees")) trees.push_back(tree_from_json(t));
            model = std::make_unique<RandomForestModel>(std::move(trees), names, threshold);
            break;
        }
        case ModelKind::gbt: {
            std::vector<Tree> trees;
            for (const auto& t : params.at("trees")) trees.push_back(tree_from_json(t));
            model = std::make_unique<GradientBoostedModel>(params.at("base_score").get<double>(),
                                                           params.at("shrinkage").get<double>(),
                                                           std::move(trees), names, threshold);
            break;
        }
        case ModelKind::mlp: {
            MlpTopology topology;
            topology.sizes = params.at("sizes").get<std::vector<int>>();
            model = std::make_unique<MlpModel>(std::move(topology),
                                               params.at("params").get<std::vector<double>>(),
                                               scaler_from_json(params.at("scaler")), names,
                                               threshold);
            break;
        }
    }
    return model;
}

} // namespace pairing::models
