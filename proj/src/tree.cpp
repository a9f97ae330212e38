#include "pairing/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pairing/rng.hpp"

namespace pairing::models {

int Tree::leaf_for(std::span<const double> x) const {
    int node = 0;
    while (nodes[node].feature >= 0)
        node = x[nodes[node].feature] <= nodes[node].threshold ? nodes[node].left
                                                               : nodes[node].right;
    return node;
}

double Tree::predict(std::span<const double> x) const {
    return nodes[leaf_for(x)].value;
}

DesignMatrix::DesignMatrix(std::vector<double> values, int n_rows, int n_cols)
    : values_(std::move(values)), rows_(n_rows), cols_(n_cols) {
    if (rows_ < 0 || cols_ <= 0 ||
        values_.size() != static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_))
        throw DataError("design matrix shape does not match its buffer");
    sorted_.resize(values_.size());
    for (int c = 0; c < cols_; ++c) {
        std::int32_t* idx = sorted_.data() + static_cast<std::size_t>(c) * rows_;
        std::iota(idx, idx + rows_, 0);
        std::sort(idx, idx + rows_, [&](std::int32_t a, std::int32_t b) {
            const double va = at(a, c), vb = at(b, c);
            return va != vb ? va < vb : a < b;
        });
    }
}

namespace {

struct Splitter {
    const DesignMatrix& X;
    std::span<const double> y;
    std::span<const double> w;
    const TreeConfig& cfg;
    Rng rng;

    // Per-feature row-index arrays over the active rows; every feature's
    // array holds the same row set, sorted by that feature. Node ranges are
    // shared across features and partitioned in place on each split.
    std::vector<std::vector<std::int32_t>> order;
    std::vector<char> goes_left; // scratch, indexed by row
    std::vector<std::int32_t> scratch;
    std::vector<TreeNode> nodes;

    Splitter(const DesignMatrix& X_, std::span<const double> y_, std::span<const double> w_,
             const TreeConfig& cfg_)
        : X(X_), y(y_), w(w_), cfg(cfg_), rng(cfg_.seed) {
        order.resize(X.cols());
        for (int c = 0; c < X.cols(); ++c) {
            order[c].reserve(X.rows());
            for (std::int32_t r : X.sorted(c))
                if (w[r] > 0.0) order[c].push_back(r);
        }
        goes_left.assign(X.rows(), 0);
        scratch.resize(order.empty() ? 0 : order[0].size());
    }

    struct Best {
        double score = std::numeric_limits<double>::infinity();
        int feature = -1;
        double threshold = 0.0;
    };

    // Weighted Gini sum (classification) or SSE (regression) of a candidate
    // child pair; both are "smaller is better" and comparable within a node.
    static double gini_term(double sum_y, double sum_w) {
        return sum_w <= 0.0 ? 0.0 : sum_y * (sum_w - sum_y) / sum_w;
    }
    static double sse_term(double sum_y, double sum_yy, double sum_w) {
        return sum_w <= 0.0 ? 0.0 : sum_yy - sum_y * sum_y / sum_w;
    }

    std::vector<int> candidate_features() {
        const int d = X.cols();
        int k = cfg.n_candidate_features;
        if (k <= 0 || k >= d) {
            std::vector<int> all(d);
            std::iota(all.begin(), all.end(), 0);
            return all;
        }
        // Partial Fisher-Yates, then ascending order so ties break toward
        // the lowest feature index, same as the exhaustive scan.
        std::vector<int> pool(d);
        std::iota(pool.begin(), pool.end(), 0);
        for (int i = 0; i < k; ++i)
            std::swap(pool[i], pool[i + rng.uniform_int(d - i)]);
        pool.resize(k);
        std::sort(pool.begin(), pool.end());
        return pool;
    }

    int build(std::size_t lo, std::size_t hi, int depth) {
        double sum_w = 0.0, sum_y = 0.0, sum_yy = 0.0;
        for (std::size_t j = lo; j < hi; ++j) {
            const std::int32_t r = order[0][j];
            sum_w += w[r];
            sum_y += w[r] * y[r];
            sum_yy += w[r] * y[r] * y[r];
        }

        const int node_id = static_cast<int>(nodes.size());
        nodes.emplace_back();
        nodes[node_id].value = sum_w > 0.0 ? sum_y / sum_w : 0.0;

        const bool pure = cfg.regression ? sse_term(sum_y, sum_yy, sum_w) <= 1e-12
                                         : (sum_y <= 0.0 || sum_y >= sum_w);
        if (depth >= cfg.max_depth || sum_w < 2.0 * cfg.min_samples_leaf || pure)
            return node_id;

        const Best best = find_split(lo, hi, sum_w, sum_y, sum_yy);
        if (best.feature < 0) return node_id;

        const std::size_t mid = partition(lo, hi, best.feature, best.threshold);
        nodes[node_id].feature = best.feature;
        nodes[node_id].threshold = best.threshold;
        const int left = build(lo, mid, depth + 1);
        nodes[node_id].left = left;
        const int right = build(mid, hi, depth + 1);
        nodes[node_id].right = right;
        return node_id;
    }

    Best find_split(std::size_t lo, std::size_t hi, double sum_w, double sum_y, double sum_yy) {
        Best best;
        for (int f : candidate_features()) {
            const auto& idx = order[f];
            double wl = 0.0, yl = 0.0, yyl = 0.0;
            for (std::size_t j = lo; j + 1 < hi; ++j) {
                const std::int32_t r = idx[j];
                wl += w[r];
                yl += w[r] * y[r];
                yyl += w[r] * y[r] * y[r];
                const double v = X.at(r, f);
                const double v_next = X.at(idx[j + 1], f);
                if (v == v_next) continue;
                if (wl < cfg.min_samples_leaf || sum_w - wl < cfg.min_samples_leaf) continue;
                const double score =
                    cfg.regression
                        ? sse_term(yl, yyl, wl) + sse_term(sum_y - yl, sum_yy - yyl, sum_w - wl)
                        : gini_term(yl, wl) + gini_term(sum_y - yl, sum_w - wl);
                if (score < best.score) {
                    double threshold = v + (v_next - v) / 2.0;
                    if (threshold >= v_next) threshold = v; // adjacent doubles
                    best = {score, f, threshold};
                }
            }
        }
        return best;
    }

    std::size_t partition(std::size_t lo, std::size_t hi, int feature, double threshold) {
        for (std::size_t j = lo; j < hi; ++j) {
            const std::int32_t r = order[0][j];
            goes_left[r] = X.at(r, feature) <= threshold ? 1 : 0;
        }
        std::size_t mid = lo;
        for (auto& idx : order) {
            std::size_t n_left = 0, n_right = 0;
            for (std::size_t j = lo; j < hi; ++j) {
                const std::int32_t r = idx[j];
                if (goes_left[r])
                    idx[lo + n_left++] = r;
                else
                    scratch[n_right++] = r;
            }
            std::copy(scratch.begin(), scratch.begin() + n_right, idx.begin() + lo + n_left);
            mid = lo + n_left;
        }
        return mid;
    }
};

} // namespace

Tree build_tree(const DesignMatrix& X, std::span<const double> targets,
                std::span<const double> weights, const TreeConfig& cfg) {
    if (targets.size() != static_cast<std::size_t>(X.rows()) || weights.size() != targets.size())
        throw DataError("build_tree: targets/weights do not match the matrix");
    Splitter splitter(X, targets, weights, cfg);
    if (splitter.order.empty() || splitter.order[0].empty())
        throw DataError("build_tree: no rows with positive weight");
    Tree tree;
    splitter.build(0, splitter.order[0].size(), 0);
    tree.nodes = std::move(splitter.nodes);
    return tree;
}

} // namespace pairing::models
