#include <algorithm>
#include <limits>
#include <random>

#include <fmt/format.h>

#include "optday/error.hpp"
#include "optday/features.hpp"

namespace optday {

namespace {

double squared_distance(std::span<const double> a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
    return d;
}

std::vector<std::vector<double>> kmeans_plus_plus(const FeatureMatrix& x, int k,
                                                  std::mt19937_64& rng) {
    const std::size_t n = x.n_rows;
    std::vector<std::vector<double>> centroids;
    std::uniform_int_distribution<std::size_t> first(0, n - 1);
    const std::size_t c0 = first(rng);
    centroids.emplace_back(x.row(c0).begin(), x.row(c0).end());

    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(x.row(i), centroids[0]);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    while (static_cast<int>(centroids.size()) < k) {
        double total = 0.0;
        for (double d : d2) total += d;
        std::size_t chosen = 0;
        if (total > 0.0) {
            const double target = unit(rng) * total;
            double running = 0.0;
            chosen = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                running += d2[i];
                if (running > target && d2[i] > 0.0) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = first(rng);
        }
        centroids.emplace_back(x.row(chosen).begin(), x.row(chosen).end());
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], squared_distance(x.row(i), centroids.back()));
        }
    }
    return centroids;
}

}  // namespace

KMeansResult kmeans(const FeatureMatrix& rows, int k, std::uint64_t seed, int max_iterations) {
    if (k < 1) throw InvalidArgument("k must be >= 1");
    if (rows.n_rows < static_cast<std::size_t>(k)) {
        throw InvalidArgument(
            fmt::format("k-means needs at least k={} rows, got {}", k, rows.n_rows));
    }
    const std::size_t n = rows.n_rows;
    const std::size_t dims = rows.n_cols();
    std::mt19937_64 rng(seed);

    KMeansResult out;
    out.centroids = kmeans_plus_plus(rows, k, rng);
    out.labels.assign(n, -1);
    std::vector<double> dist(n, 0.0);

    for (int iter = 0; iter < max_iterations; ++iter) {
        bool changed = false;
        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                const double d = squared_distance(rows.row(i), out.centroids[static_cast<std::size_t>(c)]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            changed = changed || out.labels[i] != best;
            out.labels[i] = best;
            dist[i] = best_d;
            inertia += best_d;
        }
        out.inertia_trace.push_back(inertia);
        out.iterations = iter + 1;
        if (!changed) break;

        std::vector<std::vector<double>> sums(static_cast<std::size_t>(k),
                                              std::vector<double>(dims, 0.0));
        std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(out.labels[i]);
            ++counts[c];
            for (std::size_t j = 0; j < dims; ++j) sums[c][j] += rows.at(i, j);
        }
        for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
            if (counts[c] == 0) continue;
            for (std::size_t j = 0; j < dims; ++j) {
                out.centroids[c][j] = sums[c][j] / static_cast<double>(counts[c]);
            }
        }
        // Re-seed empty clusters at the point currently worst served by its
        // own centroid; that point is then claimed so two empties differ.
        for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
            if (counts[c] != 0) continue;
            std::size_t far = 0;
            double far_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = squared_distance(
                    rows.row(i), out.centroids[static_cast<std::size_t>(out.labels[i])]);
                if (d > far_d) {
                    far_d = d;
                    far = i;
                }
            }
            if (far_d <= 0.0) continue;
            out.centroids[c].assign(rows.row(far).begin(), rows.row(far).end());
            --counts[static_cast<std::size_t>(out.labels[far])];
            out.labels[far] = static_cast<int>(c);
            counts[c] = 1;
        }
    }
    return out;
}

}  // namespace optday
