#pragma once

// CART-style binary trees with exact threshold splits, shared by the single
// decision tree, the random forest, and the boosted ensemble. Per-feature
// sort order is computed once per design matrix and partitioned in place as
// nodes split, so growing many trees over the same data stays cheap.

#include <cstdint>
#include <span>
#include <vector>

#include "pairing/errors.hpp"

namespace pairing::models {

struct TreeNode {
    int feature = -1; // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0; // leaf payload: class-1 fraction or regression mean
};

struct Tree {
    std::vector<TreeNode> nodes;

    bool empty() const { return nodes.empty(); }
    int leaf_for(std::span<const double> x) const;
    double predict(std::span<const double> x) const;
};

// Row-major feature matrix plus cached per-feature sort order.
class DesignMatrix {
public:
    DesignMatrix(std::vector<double> values, int n_rows, int n_cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double at(int r, int c) const { return values_[static_cast<std::size_t>(r) * cols_ + c]; }
    std::span<const double> row(int r) const {
        return {values_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)};
    }
    // Row indices sorted ascending by the feature's value (ties by row index).
    std::span<const std::int32_t> sorted(int c) const {
        return {sorted_.data() + static_cast<std::size_t>(c) * rows_, static_cast<std::size_t>(rows_)};
    }

private:
    std::vector<double> values_;
    int rows_;
    int cols_;
    std::vector<std::int32_t> sorted_;
};

struct TreeConfig {
    int max_depth = 8;
    int min_samples_leaf = 20;
    bool regression = false;        // squared error instead of Gini impurity
    int n_candidate_features = 0;   // 0 = consider every feature
    std::uint64_t seed = 0;         // feature subsampling stream
};

// targets: labels in {0,1} for classification, arbitrary reals for regression.
// weights: non-negative sample weights (bootstrap multiplicities); rows with
// zero weight are excluded entirely.
Tree build_tree(const DesignMatrix& X, std::span<const double> targets,
                std::span<const double> weights, const TreeConfig& cfg);

} // namespace pairing::models
