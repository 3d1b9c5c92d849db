#pragma once

// Digitization: scaling of pieces, clustering back-end dispatch, symbol
// assignment with a shared codebook, and the closed-form automatic choice of
// the aggregation tolerance alpha from the compression tolerance.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "jabba/clustering.hpp"
#include "jabba/compression.hpp"
#include "jabba/core.hpp"

namespace jabba {

// ---------------------------------------------------------------------------
// Scaling (lengths weighted by scl, both axes normalized by their stds)

inline std::pair<std::vector<Point2>, ScalingParams> scale_pieces(
    const std::vector<Piece>& pieces, double scl) {
    if (pieces.empty()) throw invalid_input("scale_pieces: no pieces");
    if (scl < 0.0) throw invalid_input("scale_pieces: scl must be >= 0");

    const double n = static_cast<double>(pieces.size());
    double mean_len = 0.0, mean_inc = 0.0;
    for (const Piece& p : pieces) {
        mean_len += static_cast<double>(p.len);
        mean_inc += p.inc;
    }
    mean_len /= n;
    mean_inc /= n;

    double var_len = 0.0, var_inc = 0.0;
    for (const Piece& p : pieces) {
        const double dl = static_cast<double>(p.len) - mean_len;
        const double di = p.inc - mean_inc;
        var_len += dl * dl;
        var_inc += di * di;
    }
    // sample standard deviation; degenerate axes fall back to 1 so scaling
    // is a no-op there
    ScalingParams params;
    params.scl = scl;
    params.sigma_len = pieces.size() > 1 ? std::sqrt(var_len / (n - 1.0)) : 0.0;
    params.sigma_inc = pieces.size() > 1 ? std::sqrt(var_inc / (n - 1.0)) : 0.0;
    if (params.sigma_len <= 0.0) params.sigma_len = 1.0;
    if (params.sigma_inc <= 0.0) params.sigma_inc = 1.0;

    std::vector<Point2> scaled;
    scaled.reserve(pieces.size());
    for (const Piece& p : pieces) scaled.push_back(params.apply(p));
    return {std::move(scaled), params};
}

// ---------------------------------------------------------------------------
// Automatic alpha from the Brownian-bridge error budget: picks the
// aggregation tolerance whose worst-case digitization error matches the
// compression error bound (n - N) * tol^2.

inline double auto_alpha(std::int64_t n, std::int64_t N, double tol, double eta) {
    if (N < 1 || n <= N) throw invalid_input("auto_alpha: requires n > N >= 1");
    if (!(tol > 0.0)) throw invalid_input("auto_alpha: tol must be > 0");
    if (!(eta > 0.0)) throw invalid_input("auto_alpha: eta must be > 0");
    const double dn = static_cast<double>(n);
    const double dN = static_cast<double>(N);
    const double poly = 3.0 * dn * dn * dn * dn + 2.0 - 5.0 * dn * dn;
    const double num = 60.0 * dn * (dn - dN) * tol * tol;
    return std::pow(num / (dN * eta * eta * poly), 0.25);
}

struct AutoDigitizeConfig {
    double eta = 1.0;  // stay eta standard deviations away from the zero mean

    void validate() const {
        if (!(eta > 0.0)) throw invalid_input("AutoDigitizeConfig: eta must be > 0");
    }
};

// ---------------------------------------------------------------------------
// Back-end dispatch

enum class Backend { vq, sampling_vq, ga, ga_auto, ga_hier };

inline const char* to_string(Backend b) {
    switch (b) {
        case Backend::vq: return "vq";
        case Backend::sampling_vq: return "svq";
        case Backend::ga: return "ga";
        case Backend::ga_auto: return "ga-auto";
        case Backend::ga_hier: return "ga-hier";
    }
    return "?";
}

inline Backend backend_from_string(const std::string& s) {
    if (s == "vq") return Backend::vq;
    if (s == "svq") return Backend::sampling_vq;
    if (s == "ga") return Backend::ga;
    if (s == "ga-auto") return Backend::ga_auto;
    if (s == "ga-hier") return Backend::ga_hier;
    throw invalid_input("unknown backend \"" + s + "\"");
}

struct DigitizeConfig {
    Backend backend = Backend::ga;
    double scl = 1.0;
    VQConfig vq;
    GAConfig ga;
    AutoDigitizeConfig auto_digitize;
    double tol = 0.0;  // compression tolerance, consumed by ga-auto
};

namespace detail {

struct ClusterRun {
    std::vector<std::uint32_t> labels;
    std::size_t k = 0;
    // sampling back-end only: sample indices + labels, for clusters that end
    // up empty under the full-data assignment
    std::vector<std::size_t> sample;
    std::vector<std::uint32_t> sample_labels;
    std::vector<Point2> backend_centers;
};

inline ClusterRun run_backend(const std::vector<Point2>& points, const CompressedBatch& batch,
                              const DigitizeConfig& cfg) {
    ClusterRun run;
    switch (cfg.backend) {
        case Backend::vq: {
            VQConfig c = cfg.vq;
            c.r = 1.0;
            KMeansResult km = kmeans(points, c);
            run.labels = std::move(km.labels);
            run.k = cfg.vq.k;
            run.backend_centers = std::move(km.centers);
            break;
        }
        case Backend::sampling_vq: {
            SamplingKMeansResult sk = sampling_kmeans(points, cfg.vq);
            run.labels = std::move(sk.labels);
            run.k = cfg.vq.k;
            run.sample = std::move(sk.sample);
            run.sample_labels = std::move(sk.sample_labels);
            run.backend_centers = std::move(sk.centers);
            break;
        }
        case Backend::ga:
        case Backend::ga_auto: {
            GAConfig c = cfg.ga;
            if (cfg.backend == Backend::ga_auto) {
                cfg.auto_digitize.validate();
                c.alpha = auto_alpha(batch.total_steps(),
                                     static_cast<std::int64_t>(points.size()), cfg.tol,
                                     cfg.auto_digitize.eta);
            }
            GAResult ga = greedy_aggregate(points, c);
            run.labels = std::move(ga.labels);
            run.k = ga.centers.size();
            run.backend_centers = std::move(ga.centers);
            break;
        }
        case Backend::ga_hier: {
            // two 1-D aggregations (lengths, increments) with alpha_len =
            // alpha_inc; pieces are labeled by the observed pair of group ids
            GAConfig c = cfg.ga;
            const double a_len = c.alpha_len.value_or(c.alpha);
            const double a_inc = c.alpha_inc.value_or(c.alpha);
            auto embed = [&](int axis) {
                std::vector<Point2> e(points.size());
                for (std::size_t i = 0; i < points.size(); ++i) e[i] = {points[i][axis], 0.0};
                return e;
            };
            GAConfig c_len = c, c_inc = c;
            c_len.alpha = a_len;
            c_inc.alpha = a_inc;
            const GAResult g_len = greedy_aggregate(embed(0), c_len);
            const GAResult g_inc = greedy_aggregate(embed(1), c_inc);
            std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> pair_ids;
            run.labels.resize(points.size());
            for (std::size_t i = 0; i < points.size(); ++i) {
                const auto key = std::make_pair(g_len.labels[i], g_inc.labels[i]);
                auto it = pair_ids.find(key);
                if (it == pair_ids.end())
                    it = pair_ids.emplace(key, static_cast<std::uint32_t>(pair_ids.size())).first;
                run.labels[i] = it->second;
            }
            run.k = pair_ids.size();
            break;
        }
    }
    return run;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// The digitization: cluster the scaled pieces of a joint fit, build the
// shared codebook (centers are the means of the final label groups, symbols
// ordered by decreasing cluster cardinality), split tokens per series.

inline SymbolicResult digitize(const CompressedBatch& batch, const DigitizeConfig& cfg) {
    std::vector<Piece> pieces;
    pieces.reserve(batch.total_pieces());
    for (const auto& seg : batch.segments)
        pieces.insert(pieces.end(), seg.pieces.begin(), seg.pieces.end());
    if (pieces.empty()) throw invalid_input("digitize: no pieces");

    auto [points, scaling] = scale_pieces(pieces, cfg.scl);
    detail::ClusterRun run = detail::run_backend(points, batch, cfg);

    // group statistics over the final labels; symbolic centers are the group
    // means so mean-based reconstruction identities hold for every back-end
    const std::size_t k = run.k;
    std::vector<Point2> sums(k, Point2{0.0, 0.0});
    std::vector<double> len_sums(k, 0.0);
    std::vector<std::size_t> counts(k, 0);
    std::vector<std::size_t> first_seen(k, std::numeric_limits<std::size_t>::max());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const std::uint32_t g = run.labels[i];
        sums[g][0] += points[i][0];
        sums[g][1] += points[i][1];
        len_sums[g] += static_cast<double>(pieces[i].len);
        ++counts[g];
        if (first_seen[g] == std::numeric_limits<std::size_t>::max()) first_seen[g] = i;
    }

    std::vector<Point2> centers(k);
    std::vector<double> mean_lengths(k);
    for (std::size_t g = 0; g < k; ++g) {
        if (counts[g] > 0) {
            centers[g] = {sums[g][0] / static_cast<double>(counts[g]),
                          sums[g][1] / static_cast<double>(counts[g])};
            mean_lengths[g] = len_sums[g] / static_cast<double>(counts[g]);
        } else {
            // sampling back-end: cluster won no full-data points; keep its
            // sample-level center and sample mean length
            centers[g] = run.backend_centers.at(g);
            double ls = 0.0;
            std::size_t lc = 0;
            for (std::size_t s = 0; s < run.sample.size(); ++s) {
                if (run.sample_labels[s] != g) continue;
                ls += static_cast<double>(pieces[run.sample[s]].len);
                ++lc;
            }
            mean_lengths[g] = lc > 0 ? ls / static_cast<double>(lc) : 1.0;
        }
    }

    // order clusters by decreasing cardinality, ties by first occurrence
    // (empty clusters go last, by original id)
    std::vector<std::size_t> order(k);
    for (std::size_t g = 0; g < k; ++g) order[g] = g;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (counts[a] != counts[b]) return counts[a] > counts[b];
        return first_seen[a] < first_seen[b];
    });
    std::vector<std::uint32_t> rank_of(k);
    for (std::size_t r = 0; r < k; ++r) rank_of[order[r]] = static_cast<std::uint32_t>(r);

    SymbolicResult result;
    result.layout = batch.layout;
    result.codebook.scaling = scaling;
    result.codebook.digitizer_tag = to_string(cfg.backend);
    result.codebook.centers.resize(k);
    result.codebook.mean_lengths.resize(k);
    result.codebook.symbols.resize(k);
    for (std::size_t r = 0; r < k; ++r) {
        result.codebook.centers[r] = centers[order[r]];
        result.codebook.mean_lengths[r] = mean_lengths[order[r]];
        result.codebook.symbols[r] = symbol_token(r, k);
    }
    result.codebook.validate();

    std::size_t offset = 0;
    for (const auto& seg : batch.segments) {
        SymbolicResult::Series s;
        s.id = seg.source_id;
        s.anchor = seg.anchor;
        s.source_length = seg.source_length;
        s.labels.reserve(seg.pieces.size());
        for (std::size_t i = 0; i < seg.pieces.size(); ++i)
            s.labels.push_back(rank_of[run.labels[offset + i]]);
        offset += seg.pieces.size();
        result.series.push_back(std::move(s));
    }
    return result;
}

// Symbolize unseen pieces with a fitted codebook: scale with the stored
// parameters, assign each piece to its nearest symbolic center.
inline SymbolicResult::Series symbolize_with(const Codebook& codebook, const PieceSequence& seq) {
    if (codebook.size() == 0) throw invalid_input("symbolize_with: empty codebook");
    SymbolicResult::Series s;
    s.id = seq.source_id;
    s.anchor = seq.anchor;
    s.source_length = seq.source_length;
    s.labels.reserve(seq.pieces.size());
    for (const Piece& p : seq.pieces)
        s.labels.push_back(static_cast<std::uint32_t>(codebook.nearest(codebook.scaling.apply(p))));
    return s;
}

// ---------------------------------------------------------------------------

// tau_c = 1 - |alphabet| / n, constrained to (0, 1]
inline double compression_rate(const Codebook& codebook, std::int64_t n) {
    if (n <= 0) throw invalid_input("compression_rate: n must be > 0");
    if (static_cast<std::int64_t>(codebook.size()) >= n)
        throw invalid_input("compression_rate: alphabet size " + std::to_string(codebook.size()) +
                            " with n=" + std::to_string(n) + " falls outside (0,1]");
    return 1.0 - static_cast<double>(codebook.size()) / static_cast<double>(n);
}

}  // namespace jabba
