#include "optday/trees.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "optday/error.hpp"
#include "optday/parallel.hpp"

namespace optday {

FitParams FitParams::boosted_defaults() { return FitParams{}; }

FitParams FitParams::forest_defaults() {
    FitParams p;
    p.n_trees = 300;
    p.max_depth = 0;
    p.learning_rate = 1.0;
    p.lambda = 0.0;
    p.gamma = 0.0;
    p.features_per_split = 0;
    p.bootstrap = true;
    return p;
}

RegressionTree::RegressionTree() : nodes_(1) {}

RegressionTree::RegressionTree(std::vector<TreeNode> nodes, int max_depth)
    : nodes_(std::move(nodes)), max_depth_(max_depth) {
    if (nodes_.empty()) throw InvalidArgument("tree must have at least one node");
    const int n = static_cast<int>(nodes_.size());
    std::vector<int> parents(nodes_.size(), 0);
    for (int i = 0; i < n; ++i) {
        const TreeNode& node = nodes_[static_cast<std::size_t>(i)];
        if (!std::isfinite(node.weight)) {
            throw InvalidArgument(fmt::format("node {} has non-finite weight", i));
        }
        if (node.is_leaf()) continue;
        if (node.left <= i || node.right <= i || node.left >= n || node.right >= n ||
            node.left == node.right) {
            throw InvalidArgument(fmt::format("node {} has invalid children", i));
        }
        if (!std::isfinite(node.threshold)) {
            throw InvalidArgument(fmt::format("node {} has non-finite threshold", i));
        }
        ++parents[static_cast<std::size_t>(node.left)];
        ++parents[static_cast<std::size_t>(node.right)];
    }
    for (int i = 1; i < n; ++i) {
        if (parents[static_cast<std::size_t>(i)] != 1) {
            throw InvalidArgument(fmt::format("node {} is not reachable exactly once", i));
        }
    }
}

std::size_t RegressionTree::leaf_of(std::span<const double> row) const {
    std::size_t i = 0;
    while (!nodes_[i].is_leaf()) {
        const TreeNode& n = nodes_[i];
        i = static_cast<std::size_t>(row[static_cast<std::size_t>(n.feature)] < n.threshold
                                         ? n.left
                                         : n.right);
    }
    return i;
}

double RegressionTree::predict(std::span<const double> row) const {
    return nodes_[leaf_of(row)].weight;
}

std::size_t RegressionTree::leaf_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

int RegressionTree::depth() const {
    std::vector<int> depth(nodes_.size(), 0);
    int deepest = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const TreeNode& n = nodes_[i];
        deepest = std::max(deepest, depth[i]);
        if (n.is_leaf()) continue;
        depth[static_cast<std::size_t>(n.left)] = depth[i] + 1;
        depth[static_cast<std::size_t>(n.right)] = depth[i] + 1;
    }
    return deepest;
}

namespace {

using RowIndex = std::uint32_t;

// Per-feature row orders, sorted by value with ties by row index.
std::vector<std::vector<RowIndex>> presort(const FeatureMatrix& x) {
    std::vector<std::vector<RowIndex>> orders(x.n_cols());
    for (std::size_t f = 0; f < x.n_cols(); ++f) {
        auto& order = orders[f];
        order.resize(x.n_rows);
        std::iota(order.begin(), order.end(), RowIndex{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](RowIndex a, RowIndex b) { return x.at(a, f) < x.at(b, f); });
    }
    return orders;
}

struct SplitCandidate {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

double midpoint(double lo, double hi) {
    const double mid = lo + (hi - lo) / 2.0;
    return lo < mid ? mid : hi;
}

// Grows one tree over rows with nonzero multiplicity. Each feature keeps its
// sorted row order; a node owns the same contiguous range [begin, end) in all
// of them, and splitting stable-partitions every range.
class TreeBuilder {
public:
    TreeBuilder(const FeatureMatrix& x, std::span<const double> grad, std::span<const double> hess,
                std::span<const std::uint32_t> multiplicity,
                const std::vector<std::vector<RowIndex>>& sorted, const FitParams& params,
                int features_per_split, std::mt19937_64* rng)
        : x_(x), grad_(grad), hess_(hess), mult_(multiplicity), params_(params),
          features_per_split_(features_per_split), rng_(rng), goes_left_(x.n_rows, 0) {
        orders_.reserve(sorted.size());
        for (const auto& order : sorted) {
            std::vector<RowIndex> kept;
            kept.reserve(order.size());
            for (RowIndex r : order) {
                if (weight(r) > 0) kept.push_back(r);
            }
            orders_.push_back(std::move(kept));
        }
        buffer_.resize(orders_.empty() ? 0 : orders_.front().size());
        feature_pool_.resize(x.n_cols());
        std::iota(feature_pool_.begin(), feature_pool_.end(), 0);
    }

    RegressionTree build() {
        if (orders_.empty() || orders_.front().empty()) {
            throw InvalidArgument("cannot fit a tree on zero rows");
        }
        grow(0, orders_.front().size(), 0);
        return RegressionTree(std::move(nodes_), params_.max_depth);
    }

private:
    std::uint32_t weight(RowIndex r) const { return mult_.empty() ? 1U : mult_[r]; }

    int grow(std::size_t begin, std::size_t end, int depth) {
        double g_sum = 0.0, h_sum = 0.0, energy = 0.0;
        std::uint64_t count = 0;
        for (std::size_t i = begin; i < end; ++i) {
            const RowIndex r = orders_.front()[i];
            const double m = weight(r);
            g_sum += m * grad_[r];
            h_sum += m * hess_[r];
            energy += m * grad_[r] * grad_[r];
            count += weight(r);
        }
        const double denom = h_sum + params_.lambda;
        const int index = static_cast<int>(nodes_.size());
        nodes_.push_back(TreeNode{});
        nodes_.back().weight = denom > 0.0 ? -g_sum / denom : 0.0;

        const bool depth_ok = params_.max_depth <= 0 || depth < params_.max_depth;
        const auto min_leaf = static_cast<std::uint64_t>(std::max(1, params_.min_samples_leaf));
        if (!depth_ok || count < 2 * min_leaf) return index;

        const SplitCandidate best = find_split(begin, end, g_sum, h_sum, count, energy);
        if (best.feature < 0) return index;

        const std::size_t mid = partition(begin, end, best);
        const int left = grow(begin, mid, depth + 1);
        const int right = grow(mid, end, depth + 1);
        TreeNode& node = nodes_[static_cast<std::size_t>(index)];
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.left = left;
        node.right = right;
        return index;
    }

    SplitCandidate find_split(std::size_t begin, std::size_t end, double g_sum, double h_sum,
                              std::uint64_t count, double energy) {
        const std::size_t m = x_.n_cols();
        std::size_t n_try = m;
        if (rng_ != nullptr && features_per_split_ < static_cast<int>(m)) {
            // Partial Fisher-Yates: the first n_try entries become the subset.
            n_try = static_cast<std::size_t>(features_per_split_);
            std::iota(feature_pool_.begin(), feature_pool_.end(), 0);
            for (std::size_t i = 0; i < n_try; ++i) {
                std::uniform_int_distribution<std::size_t> pick(i, m - 1);
                std::swap(feature_pool_[i], feature_pool_[pick(*rng_)]);
            }
            std::sort(feature_pool_.begin(), feature_pool_.begin() + static_cast<long>(n_try));
            std::sort(feature_pool_.begin() + static_cast<long>(n_try), feature_pool_.end());
        }
        const double parent = g_sum * g_sum / (h_sum + params_.lambda);
        const double tolerance = 1e-12 * energy;
        SplitCandidate best;
        best.gain = tolerance;
        // Like CART, keep drawing features past the subset until a valid split exists.
        for (std::size_t k = 0; k < m; ++k) {
            if (k >= n_try && best.feature >= 0) break;
            scan_feature(feature_pool_[k], begin, end, g_sum, h_sum, count, parent, best);
        }
        return best;
    }

    void scan_feature(int feature, std::size_t begin, std::size_t end, double g_sum, double h_sum,
                      std::uint64_t count, double parent, SplitCandidate& best) const {
        const auto f = static_cast<std::size_t>(feature);
        const auto& order = orders_[f];
        const auto min_leaf = static_cast<std::uint64_t>(std::max(1, params_.min_samples_leaf));
        const double lambda = params_.lambda;
        double gl = 0.0, hl = 0.0;
        std::uint64_t cl = 0;
        for (std::size_t i = begin; i + 1 < end; ++i) {
            const RowIndex r = order[i];
            const double w = weight(r);
            gl += w * grad_[r];
            hl += w * hess_[r];
            cl += weight(r);
            const double v = x_.at(r, f);
            const double next = x_.at(order[i + 1], f);
            if (!(v < next)) continue;
            if (cl < min_leaf || count - cl < min_leaf) continue;
            const double gr = g_sum - gl;
            const double hr = h_sum - hl;
            if (hl + lambda <= 0.0 || hr + lambda <= 0.0) continue;
            const double gain =
                0.5 * (gl * gl / (hl + lambda) + gr * gr / (hr + lambda) - parent) -
                params_.gamma;
            // Strict comparison: earlier features and lower thresholds win ties.
            if (gain > best.gain) {
                best.feature = feature;
                best.threshold = midpoint(v, next);
                best.gain = gain;
            }
        }
    }

    std::size_t partition(std::size_t begin, std::size_t end, const SplitCandidate& split) {
        const auto f = static_cast<std::size_t>(split.feature);
        std::size_t n_left = 0;
        for (std::size_t i = begin; i < end; ++i) {
            const RowIndex r = orders_[f][i];
            const bool left = x_.at(r, f) < split.threshold;
            goes_left_[r] = left ? 1 : 0;
            n_left += left ? 1 : 0;
        }
        for (auto& order : orders_) {
            std::size_t l = begin, rr = 0;
            for (std::size_t i = begin; i < end; ++i) {
                const RowIndex r = order[i];
                if (goes_left_[r]) {
                    order[l++] = r;
                } else {
                    buffer_[rr++] = r;
                }
            }
            std::copy(buffer_.begin(), buffer_.begin() + static_cast<long>(rr),
                      order.begin() + static_cast<long>(l));
        }
        return begin + n_left;
    }

    const FeatureMatrix& x_;
    std::span<const double> grad_;
    std::span<const double> hess_;
    std::span<const std::uint32_t> mult_;
    const FitParams& params_;
    int features_per_split_;
    std::mt19937_64* rng_;
    std::vector<std::vector<RowIndex>> orders_;
    std::vector<RowIndex> buffer_;
    std::vector<char> goes_left_;
    std::vector<int> feature_pool_;
    std::vector<TreeNode> nodes_;
};

void check_finite(std::span<const double> values, const char* what) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw InvalidArgument(fmt::format("non-finite {} at row {}", what, i));
        }
    }
}

void check_features(const FeatureMatrix& x) {
    if (x.n_cols() == 0) throw InvalidArgument("feature matrix has no columns");
    if (x.values.size() != x.n_rows * x.n_cols()) {
        throw InvalidArgument("feature matrix storage does not match its shape");
    }
    check_finite(x.values, "feature value");
}

void check_common(const FitParams& p) {
    if (p.n_trees < 1) throw InvalidArgument("n_trees must be >= 1");
    if (p.lambda < 0.0 || !std::isfinite(p.lambda)) throw InvalidArgument("lambda must be >= 0");
    if (p.gamma < 0.0 || !std::isfinite(p.gamma)) throw InvalidArgument("gamma must be >= 0");
    if (p.min_samples_leaf < 1) throw InvalidArgument("min_samples_leaf must be >= 1");
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

RegressionTree fit_tree(const FeatureMatrix& features, std::span<const double> gradients,
                        std::span<const double> hessians, const FitParams& params) {
    if (gradients.size() != hessians.size() || gradients.size() != features.n_rows) {
        throw InvalidArgument(fmt::format("fit_tree: {} rows, {} gradients, {} hessians",
                                          features.n_rows, gradients.size(), hessians.size()));
    }
    if (features.n_rows == 0) throw InvalidArgument("fit_tree: empty training set");
    check_features(features);
    check_finite(gradients, "gradient");
    check_finite(hessians, "hessian");
    if (params.lambda < 0.0 || params.gamma < 0.0) {
        throw InvalidArgument("lambda and gamma must be >= 0");
    }
    const auto sorted = presort(features);
    TreeBuilder builder(features, gradients, hessians, {}, sorted, params,
                        static_cast<int>(features.n_cols()), nullptr);
    return builder.build();
}

BoostedEnsemble fit_boosted(const FeatureMatrix& features, std::span<const double> targets,
                            const FitParams& params) {
    if (features.n_rows == 0) throw InvalidArgument("fit_boosted: empty training set");
    if (targets.size() != features.n_rows) {
        throw InvalidArgument(fmt::format("fit_boosted: {} rows but {} targets", features.n_rows,
                                          targets.size()));
    }
    check_common(params);
    if (!(params.learning_rate > 0.0 && params.learning_rate <= 1.0)) {
        throw InvalidArgument("learning_rate must be in (0, 1]");
    }
    check_features(features);
    check_finite(targets, "target");

    const std::size_t n = features.n_rows;
    BoostedEnsemble model;
    model.feature_schema = features.names;
    model.learning_rate = params.learning_rate;
    model.lambda = params.lambda;
    model.gamma = params.gamma;
    model.params = params;
    model.base_score = std::accumulate(targets.begin(), targets.end(), 0.0) /
                       static_cast<double>(n);

    const auto sorted = presort(features);
    std::vector<double> prediction(n, model.base_score);
    std::vector<double> grad(n), hess(n, 1.0);
    model.trees.reserve(static_cast<std::size_t>(params.n_trees));
    for (int t = 0; t < params.n_trees; ++t) {
        for (std::size_t i = 0; i < n; ++i) grad[i] = prediction[i] - targets[i];
        TreeBuilder builder(features, grad, hess, {}, sorted, params,
                            static_cast<int>(features.n_cols()), nullptr);
        RegressionTree tree = builder.build();
        for (std::size_t i = 0; i < n; ++i) {
            prediction[i] += model.learning_rate * tree.predict(features.row(i));
        }
        model.trees.push_back(std::move(tree));
    }
    return model;
}

RandomForestModel fit_forest(const FeatureMatrix& features, std::span<const double> targets,
                             const FitParams& params, unsigned jobs) {
    if (features.n_rows == 0) throw InvalidArgument("fit_forest: empty training set");
    if (targets.size() != features.n_rows) {
        throw InvalidArgument(fmt::format("fit_forest: {} rows but {} targets", features.n_rows,
                                          targets.size()));
    }
    check_common(params);
    check_features(features);
    check_finite(targets, "target");
    const int m = static_cast<int>(features.n_cols());
    int per_split = params.features_per_split;
    if (per_split == 0) per_split = (m + 2) / 3;
    if (per_split < 1 || per_split > m) {
        throw InvalidArgument(
            fmt::format("features_per_split {} must be in 1..{}", params.features_per_split, m));
    }

    FitParams tree_params = params;
    tree_params.lambda = 0.0;
    tree_params.gamma = 0.0;

    const std::size_t n = features.n_rows;
    std::vector<double> grad(n), hess(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) grad[i] = -targets[i];
    const auto sorted = presort(features);

    RandomForestModel model;
    model.feature_schema = features.names;
    model.features_per_split = per_split;
    model.bootstrap = params.bootstrap;
    model.seed = params.seed;
    model.params = params;
    model.trees.resize(static_cast<std::size_t>(params.n_trees));

    parallel_for(model.trees.size(), jobs, [&](std::size_t b) {
        std::mt19937_64 rng(splitmix64(params.seed ^ splitmix64(b)));
        std::vector<std::uint32_t> multiplicity;
        if (params.bootstrap) {
            multiplicity.assign(n, 0);
            std::uniform_int_distribution<std::size_t> draw(0, n - 1);
            for (std::size_t i = 0; i < n; ++i) ++multiplicity[draw(rng)];
        }
        TreeBuilder builder(features, grad, hess, multiplicity, sorted, tree_params, per_split,
                            &rng);
        model.trees[b] = builder.build();
    });
    return model;
}

void check_schema(const std::vector<std::string>& expected,
                  const std::vector<std::string>& actual) {
    if (expected == actual) return;
    std::vector<std::string> missing, extra;
    for (const auto& name : expected) {
        if (std::find(actual.begin(), actual.end(), name) == actual.end()) missing.push_back(name);
    }
    for (const auto& name : actual) {
        if (std::find(expected.begin(), expected.end(), name) == expected.end()) {
            extra.push_back(name);
        }
    }
    if (missing.empty() && extra.empty()) {
        throw InvalidArgument(fmt::format("feature order differs from training schema [{}]",
                                          fmt::join(expected, ", ")));
    }
    throw InvalidArgument(fmt::format("feature schema mismatch: missing [{}], extra [{}]",
                                      fmt::join(missing, ", "), fmt::join(extra, ", ")));
}

std::vector<double> predict_staged(const BoostedEnsemble& model, const FeatureMatrix& features,
                                   std::size_t n_trees) {
    check_schema(model.feature_schema, features.names);
    n_trees = std::min(n_trees, model.trees.size());
    std::vector<double> out(features.n_rows, model.base_score);
    for (std::size_t i = 0; i < features.n_rows; ++i) {
        double sum = 0.0;
        for (std::size_t t = 0; t < n_trees; ++t) sum += model.trees[t].predict(features.row(i));
        out[i] += model.learning_rate * sum;
    }
    return out;
}

std::vector<double> predict(const BoostedEnsemble& model, const FeatureMatrix& features) {
    return predict_staged(model, features, model.trees.size());
}

std::vector<double> predict(const RandomForestModel& model, const FeatureMatrix& features) {
    check_schema(model.feature_schema, features.names);
    if (model.trees.empty()) throw InvalidArgument("forest has no trees");
    std::vector<double> out(features.n_rows, 0.0);
    for (std::size_t i = 0; i < features.n_rows; ++i) {
        double sum = 0.0;
        for (const auto& tree : model.trees) sum += tree.predict(features.row(i));
        out[i] = sum / static_cast<double>(model.trees.size());
    }
    return out;
}

}  // namespace optday
