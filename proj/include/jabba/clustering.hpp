#pragma once

// Clustering back-ends for digitization: k-means++ (D^2 seeding + Lloyd),
// its sampling-based variant, and sorted greedy aggregation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "jabba/core.hpp"
#include "jabba/metrics.hpp"

namespace jabba {

struct VQConfig {
    std::size_t k = 8;
    double r = 1.0;             // sampling fraction in (0,1]
    std::size_t max_iters = 300;
    std::size_t n_init = 1;     // 1 is good enough in this setting
    std::uint64_t seed = 0;

    void validate() const {
        if (k < 1) throw invalid_input("VQConfig: k must be >= 1");
        if (!(r > 0.0 && r <= 1.0)) throw invalid_input("VQConfig: r must be in (0,1]");
        if (max_iters < 1) throw invalid_input("VQConfig: max_iters must be >= 1");
        if (n_init < 1) throw invalid_input("VQConfig: n_init must be >= 1");
    }
};

enum class SortKey { first_principal_component, two_norm };

struct GAConfig {
    double alpha = 0.5;
    SortKey sort_key = SortKey::first_principal_component;
    bool early_stop = true;
    std::optional<double> alpha_len;  // per-axis tolerances, hierarchical mode
    std::optional<double> alpha_inc;

    void validate() const {
        if (!(alpha > 0.0)) throw invalid_input("GAConfig: alpha must be > 0");
        if (alpha_len && !(*alpha_len > 0.0)) throw invalid_input("GAConfig: alpha_len must be > 0");
        if (alpha_inc && !(*alpha_inc > 0.0)) throw invalid_input("GAConfig: alpha_inc must be > 0");
    }
};

namespace detail {

inline double dist2(const Point2& a, const Point2& b) {
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    return dx * dx + dy * dy;
}

// cumulative-weight pick; deterministic given the generator state
inline std::size_t weighted_index(const std::vector<double>& weights, double total,
                                  std::mt19937_64& rng) {
    const double u = std::uniform_real_distribution<double>(0.0, total)(rng);
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return i;
    }
    // roundoff spill: last positive-weight index
    for (std::size_t i = weights.size(); i-- > 0;)
        if (weights[i] > 0.0) return i;
    return weights.size() - 1;
}

// first sample_size entries of a partial Fisher-Yates shuffle of 0..n-1
inline std::vector<std::size_t> sample_indices(std::size_t n, std::size_t sample_size,
                                               std::mt19937_64& rng) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < sample_size; ++i) {
        const std::size_t j =
            i + std::uniform_int_distribution<std::size_t>(0, n - 1 - i)(rng);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(sample_size);
    return idx;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// D^2 weighting (k-means++ seeding)

inline std::vector<Point2> d2_seed(const std::vector<Point2>& points, std::size_t k,
                                   std::mt19937_64& rng) {
    if (k < 1) throw invalid_input("d2_seed: k must be >= 1");
    if (k > points.size())
        throw invalid_input("d2_seed: k=" + std::to_string(k) + " exceeds " +
                            std::to_string(points.size()) + " points");

    std::vector<Point2> centers;
    centers.reserve(k);
    std::vector<char> chosen(points.size(), 0);

    const std::size_t first =
        std::uniform_int_distribution<std::size_t>(0, points.size() - 1)(rng);
    centers.push_back(points[first]);
    chosen[first] = 1;

    std::vector<double> d2(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        d2[i] = detail::dist2(points[i], centers.front());

    while (centers.size() < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) total += chosen[i] ? 0.0 : d2[i];
        std::size_t next;
        if (total > 0.0) {
            std::vector<double> w(points.size());
            for (std::size_t i = 0; i < points.size(); ++i) w[i] = chosen[i] ? 0.0 : d2[i];
            next = detail::weighted_index(w, total, rng);
        } else {
            // every remaining point duplicates a center; take the first free slot
            next = 0;
            while (next < points.size() && chosen[next]) ++next;
        }
        chosen[next] = 1;
        centers.push_back(points[next]);
        for (std::size_t i = 0; i < points.size(); ++i)
            d2[i] = std::min(d2[i], detail::dist2(points[i], centers.back()));
    }
    return centers;
}

// ---------------------------------------------------------------------------
// Lloyd iterations from D^2 seeds

struct KMeansResult {
    std::vector<std::uint32_t> labels;
    std::vector<Point2> centers;
    double sse = 0.0;
    std::size_t iterations = 0;
    std::vector<double> sse_trace;  // one entry per Lloyd iteration
};

namespace detail {

inline std::uint32_t nearest_center(const Point2& p, const std::vector<Point2>& centers) {
    std::uint32_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.size(); ++c) {
        const double d = dist2(p, centers[c]);
        if (d < best_d) {
            best_d = d;
            best = static_cast<std::uint32_t>(c);
        }
    }
    return best;
}

inline void assign_all(const std::vector<Point2>& points, const std::vector<Point2>& centers,
                       std::vector<std::uint32_t>& labels) {
    labels.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) labels[i] = nearest_center(points[i], centers);
}

// mean centers of the label groups; an empty cluster is re-seeded to the
// point currently farthest from its own center
inline void update_means(const std::vector<Point2>& points, std::vector<std::uint32_t>& labels,
                         std::vector<Point2>& centers) {
    const std::size_t k = centers.size();
    std::vector<Point2> sums(k, Point2{0.0, 0.0});
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        sums[labels[i]][0] += points[i][0];
        sums[labels[i]][1] += points[i][1];
        ++counts[labels[i]];
    }
    for (std::size_t c = 0; c < k; ++c)
        if (counts[c] > 0)
            centers[c] = {sums[c][0] / static_cast<double>(counts[c]),
                          sums[c][1] / static_cast<double>(counts[c])};
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] > 0) continue;
        std::size_t far_i = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (counts[labels[i]] <= 1) continue;  // don't empty another cluster
            const double d = dist2(points[i], centers[labels[i]]);
            if (d > far_d) {
                far_d = d;
                far_i = i;
            }
        }
        --counts[labels[far_i]];
        labels[far_i] = static_cast<std::uint32_t>(c);
        counts[c] = 1;
        centers[c] = points[far_i];
    }
}

inline KMeansResult lloyd_once(const std::vector<Point2>& points, std::size_t k,
                               std::size_t max_iters, std::mt19937_64& rng) {
    KMeansResult res;
    res.centers = d2_seed(points, k, rng);
    assign_all(points, res.centers, res.labels);
    std::vector<std::uint32_t> next_labels;
    for (std::size_t it = 0; it < max_iters; ++it) {
        update_means(points, res.labels, res.centers);
        res.sse_trace.push_back(sse(points, res.labels, res.centers));
        ++res.iterations;
        next_labels = res.labels;
        assign_all(points, res.centers, next_labels);
        if (next_labels == res.labels) break;
        res.labels = next_labels;
    }
    // centers are the means of the final assignment even when max_iters cut
    // the loop short
    update_means(points, res.labels, res.centers);
    res.sse = sse(points, res.labels, res.centers);
    return res;
}

}  // namespace detail

inline KMeansResult kmeans(const std::vector<Point2>& points, const VQConfig& cfg) {
    cfg.validate();
    if (cfg.k > points.size())
        throw invalid_input("kmeans: k=" + std::to_string(cfg.k) + " exceeds " +
                            std::to_string(points.size()) + " points");
    std::mt19937_64 rng(cfg.seed);
    KMeansResult best;
    for (std::size_t restart = 0; restart < cfg.n_init; ++restart) {
        KMeansResult run = detail::lloyd_once(points, cfg.k, cfg.max_iters, rng);
        if (restart == 0 || run.sse < best.sse) best = std::move(run);
    }
    return best;
}

// Sampling-based k-means: k-means++ on a uniform sample of round(r * N) points, then one
// pass assigning every original point to its nearest sample-fitted center.
struct SamplingKMeansResult {
    std::vector<std::uint32_t> labels;      // over all points
    std::vector<Point2> centers;            // sample-cluster means
    std::vector<std::size_t> sample;        // original indices of the sample
    std::vector<std::uint32_t> sample_labels;
};

inline SamplingKMeansResult sampling_kmeans(const std::vector<Point2>& points,
                                            const VQConfig& cfg) {
    cfg.validate();
    if (points.empty()) throw invalid_input("sampling_kmeans: no points");
    const auto sample_size = static_cast<std::size_t>(
        std::llround(cfg.r * static_cast<double>(points.size())));
    if (sample_size < cfg.k)
        throw invalid_input("sampling_kmeans: sample of " + std::to_string(sample_size) +
                            " points is smaller than k=" + std::to_string(cfg.k) +
                            " (increase r)");

    std::mt19937_64 rng(cfg.seed);
    SamplingKMeansResult res;
    res.sample = detail::sample_indices(points.size(), sample_size, rng);

    std::vector<Point2> sampled;
    sampled.reserve(sample_size);
    for (std::size_t idx : res.sample) sampled.push_back(points[idx]);

    KMeansResult inner;
    for (std::size_t restart = 0; restart < cfg.n_init; ++restart) {
        KMeansResult run = detail::lloyd_once(sampled, cfg.k, cfg.max_iters, rng);
        if (restart == 0 || run.sse < inner.sse) inner = std::move(run);
    }
    res.centers = std::move(inner.centers);
    res.sample_labels = std::move(inner.labels);
    detail::assign_all(points, res.centers, res.labels);
    return res;
}

// ---------------------------------------------------------------------------
// Greedy aggregation

struct GAResult {
    std::vector<std::uint32_t> labels;
    std::vector<std::size_t> starting_points;  // original index of each group's seed
    std::vector<Point2> centers;               // group means
    std::size_t groups() const { return centers.size(); }
};

namespace detail {

// sort keys: projection onto the first principal axis of the centered data,
// or the plain two-norm. Both are 1-Lipschitz, so a key gap is a lower bound
// on the pairwise distance and can terminate a group scan early.
inline std::vector<double> sort_keys(const std::vector<Point2>& points, SortKey key) {
    std::vector<double> keys(points.size());
    if (key == SortKey::two_norm) {
        for (std::size_t i = 0; i < points.size(); ++i)
            keys[i] = std::sqrt(points[i][0] * points[i][0] + points[i][1] * points[i][1]);
        return keys;
    }
    const double n = static_cast<double>(points.size());
    double mx = 0.0, my = 0.0;
    for (const auto& p : points) {
        mx += p[0];
        my += p[1];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& p : points) {
        const double dx = p[0] - mx;
        const double dy = p[1] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    const double theta = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
    double vx = std::cos(theta), vy = std::sin(theta);
    if (vx < 0.0 || (vx == 0.0 && vy < 0.0)) {  // deterministic sign
        vx = -vx;
        vy = -vy;
    }
    for (std::size_t i = 0; i < points.size(); ++i)
        keys[i] = vx * (points[i][0] - mx) + vy * (points[i][1] - my);
    return keys;
}

}  // namespace detail

inline GAResult greedy_aggregate(const std::vector<Point2>& points, const GAConfig& cfg) {
    cfg.validate();
    if (points.empty()) throw invalid_input("greedy_aggregate: no points");
    const double alpha = cfg.alpha;
    const double alpha2 = alpha * alpha;

    const std::vector<double> keys = detail::sort_keys(points, cfg.sort_key);
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });

    GAResult res;
    res.labels.assign(points.size(), 0);
    std::vector<char> assigned(points.size(), 0);
    std::vector<Point2> sums;
    std::vector<std::size_t> counts;

    for (std::size_t si = 0; si < order.size(); ++si) {
        const std::size_t sp = order[si];
        if (assigned[sp]) continue;
        const auto group = static_cast<std::uint32_t>(res.starting_points.size());
        res.starting_points.push_back(sp);
        sums.push_back(points[sp]);
        counts.push_back(1);
        assigned[sp] = 1;
        res.labels[sp] = group;

        for (std::size_t sj = si + 1; sj < order.size(); ++sj) {
            const std::size_t j = order[sj];
            if (cfg.early_stop && keys[j] - keys[sp] > alpha) break;
            if (assigned[j]) continue;
            if (detail::dist2(points[sp], points[j]) <= alpha2) {
                assigned[j] = 1;
                res.labels[j] = group;
                sums[group][0] += points[j][0];
                sums[group][1] += points[j][1];
                ++counts[group];
            }
        }
    }

    res.centers.resize(sums.size());
    for (std::size_t g = 0; g < sums.size(); ++g)
        res.centers[g] = {sums[g][0] / static_cast<double>(counts[g]),
                          sums[g][1] / static_cast<double>(counts[g])};
    return res;
}

}  // namespace jabba
