#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "optday/matrix.hpp"

namespace optday {

struct FitParams {
    int n_trees = 200;
    int max_depth = 6;  // <= 0 grows until leaves are pure or hit min_samples_leaf
    double learning_rate = 0.1;
    double lambda = 1.0;
    double gamma = 0.0;
    int min_samples_leaf = 1;
    int features_per_split = 0;  // forest only; 0 means ceil(m / 3)
    bool bootstrap = true;       // forest only
    std::uint64_t seed = 0;

    static FitParams boosted_defaults();
    static FitParams forest_defaults();
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double weight = 0.0;

    bool is_leaf() const { return feature < 0; }
    bool operator==(const TreeNode&) const = default;
};

// Binary regression tree; rows with x[feature] < threshold go left. Node 0 is
// the root.
class RegressionTree {
public:
    RegressionTree();  // single leaf with weight 0
    RegressionTree(std::vector<TreeNode> nodes, int max_depth);

    double predict(std::span<const double> row) const;
    std::size_t leaf_of(std::span<const double> row) const;

    const std::vector<TreeNode>& nodes() const { return nodes_; }
    int max_depth() const { return max_depth_; }
    std::size_t leaf_count() const;
    int depth() const;

    bool operator==(const RegressionTree&) const = default;

private:
    std::vector<TreeNode> nodes_;
    int max_depth_ = 0;
};

// prediction = base_score + learning_rate * sum_t tree_t(x)
struct BoostedEnsemble {
    std::vector<std::string> feature_schema;
    std::vector<RegressionTree> trees;
    double learning_rate = 0.1;
    double base_score = 0.0;
    double lambda = 1.0;
    double gamma = 0.0;
    FitParams params;
};

// prediction = mean of member trees
struct RandomForestModel {
    std::vector<std::string> feature_schema;
    std::vector<RegressionTree> trees;
    int features_per_split = 1;
    bool bootstrap = true;
    std::uint64_t seed = 0;
    FitParams params;
};

// Exact greedy tree on all rows for per-row gradient/hessian statistics.
// Split gain is 0.5 * (GL^2/(HL+l) + GR^2/(HR+l) - G^2/(H+l)) - gamma and
// leaf weights are -G/(H+l). Uses every feature at every split.
RegressionTree fit_tree(const FeatureMatrix& features, std::span<const double> gradients,
                        std::span<const double> hessians, const FitParams& params);

// Squared-error boosting from base_score = mean(targets).
BoostedEnsemble fit_boosted(const FeatureMatrix& features, std::span<const double> targets,
                            const FitParams& params);

// Variance-reduction trees on bootstrap resamples with per-split feature
// subsets; leaves hold sample means. Trees are built on up to `jobs` threads
// (0 = all cores); the result does not depend on `jobs`.
RandomForestModel fit_forest(const FeatureMatrix& features, std::span<const double> targets,
                             const FitParams& params, unsigned jobs = 1);

// Both throw InvalidArgument naming missing/extra features when the column
// names differ from the training schema.
std::vector<double> predict(const BoostedEnsemble& model, const FeatureMatrix& features);
std::vector<double> predict(const RandomForestModel& model, const FeatureMatrix& features);

// Prediction using only the first `n_trees` boosting rounds.
std::vector<double> predict_staged(const BoostedEnsemble& model, const FeatureMatrix& features,
                                   std::size_t n_trees);

void check_schema(const std::vector<std::string>& expected,
                  const std::vector<std::string>& actual);

// Line-oriented text format carrying the schema, parameters and node arrays.
// Doubles are written in shortest round-trip form, so load(save(m)) == m.
void save_model(std::ostream& out, const BoostedEnsemble& model);
void save_model(std::ostream& out, const RandomForestModel& model);
BoostedEnsemble load_boosted(std::istream& in);
RandomForestModel load_forest(std::istream& in);

}  // namespace optday
