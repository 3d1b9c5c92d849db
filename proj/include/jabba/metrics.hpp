#pragma once

// Evaluation metrics: MSE, DTW, SSE, adjusted mutual information, speedup.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "jabba/core.hpp"

namespace jabba {

using Point2 = std::array<double, 2>;

inline double mse(const TimeSeries& a, const TimeSeries& b) {
    if (a.values.size() != b.values.size())
        throw invalid_input("mse: length mismatch (" + std::to_string(a.values.size()) + " vs " +
                            std::to_string(b.values.size()) + ")");
    if (a.values.empty()) throw invalid_input("mse: empty series");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double d = a.values[i] - b.values[i];
        acc += d * d;
    }
    return acc / static_cast<double>(a.values.size());
}

// Full-window dynamic time warping with squared pointwise cost and sum
// aggregation. O(|a| * |b|) time, O(|b|) memory.
inline double dtw(const TimeSeries& a, const TimeSeries& b) {
    const auto& x = a.values;
    const auto& y = b.values;
    if (x.empty() || y.empty()) throw invalid_input("dtw: empty series");

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> prev(y.size() + 1, inf), cur(y.size() + 1, inf);
    prev[0] = 0.0;
    for (std::size_t i = 1; i <= x.size(); ++i) {
        cur[0] = inf;
        for (std::size_t j = 1; j <= y.size(); ++j) {
            const double d = x[i - 1] - y[j - 1];
            cur[j] = d * d + std::min({prev[j], cur[j - 1], prev[j - 1]});
        }
        std::swap(prev, cur);
    }
    return prev[y.size()];
}

inline double sse(const std::vector<Point2>& points, const std::vector<std::uint32_t>& labels,
                  const std::vector<Point2>& centers) {
    if (points.size() != labels.size()) throw invalid_input("sse: points/labels size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (labels[i] >= centers.size()) throw invalid_input("sse: label out of range");
        const Point2& c = centers[labels[i]];
        const double dx = points[i][0] - c[0];
        const double dy = points[i][1] - c[1];
        acc += dx * dx + dy * dy;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Adjusted mutual information (permutation-model expectation, max-entropy
// normalization). Labels need not be contiguous.

namespace detail {

inline double log_comb_term(std::int64_t n, std::int64_t ai, std::int64_t bj, std::int64_t nij) {
    // log of the hypergeometric probability of a contingency cell value nij
    return std::lgamma(ai + 1.0) + std::lgamma(bj + 1.0) + std::lgamma(n - ai + 1.0) +
           std::lgamma(n - bj + 1.0) - std::lgamma(n + 1.0) - std::lgamma(nij + 1.0) -
           std::lgamma(ai - nij + 1.0) - std::lgamma(bj - nij + 1.0) -
           std::lgamma(n - ai - bj + nij + 1.0);
}

}  // namespace detail

inline double ami(const std::vector<std::uint32_t>& labels_a,
                  const std::vector<std::uint32_t>& labels_b) {
    if (labels_a.empty() || labels_b.empty()) throw invalid_input("ami: empty labeling");
    if (labels_a.size() != labels_b.size()) throw invalid_input("ami: length mismatch");
    const std::int64_t n = static_cast<std::int64_t>(labels_a.size());

    std::map<std::uint32_t, std::int64_t> ca, cb;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::int64_t> joint;
    for (std::size_t i = 0; i < labels_a.size(); ++i) {
        ++ca[labels_a[i]];
        ++cb[labels_b[i]];
        ++joint[{labels_a[i], labels_b[i]}];
    }

    const double dn = static_cast<double>(n);
    auto entropy = [&](const std::map<std::uint32_t, std::int64_t>& counts) {
        double h = 0.0;
        for (const auto& [_, c] : counts) {
            const double p = static_cast<double>(c) / dn;
            h -= p * std::log(p);
        }
        return h;
    };
    const double hu = entropy(ca);
    const double hv = entropy(cb);

    double mi = 0.0;
    for (const auto& [ab, nij] : joint) {
        const double pij = static_cast<double>(nij) / dn;
        const double pa = static_cast<double>(ca[ab.first]) / dn;
        const double pb = static_cast<double>(cb[ab.second]) / dn;
        mi += pij * std::log(pij / (pa * pb));
    }

    // E[MI] under the permutation model
    double emi = 0.0;
    for (const auto& [_, ai] : ca) {
        for (const auto& [__, bj] : cb) {
            const std::int64_t lo = std::max<std::int64_t>(1, ai + bj - n);
            const std::int64_t hi = std::min(ai, bj);
            for (std::int64_t nij = lo; nij <= hi; ++nij) {
                const double term = static_cast<double>(nij) / dn *
                                    std::log(dn * static_cast<double>(nij) /
                                             (static_cast<double>(ai) * static_cast<double>(bj)));
                emi += term * std::exp(detail::log_comb_term(n, ai, bj, nij));
            }
        }
    }

    const double denom = std::max(hu, hv) - emi;
    if (std::abs(denom) < 1e-12) return 0.0;  // zero-entropy edge case
    return (mi - emi) / denom;
}

// ---------------------------------------------------------------------------

// Phi(m) = runtime(1) / runtime(m) for every measured thread count.
inline std::map<int, double> speedup(const std::map<int, double>& runtimes) {
    const auto base = runtimes.find(1);
    if (base == runtimes.end()) throw invalid_input("speedup: missing m=1 baseline");
    if (!(base->second > 0)) throw invalid_input("speedup: nonpositive baseline runtime");
    std::map<int, double> phi;
    for (const auto& [m, t] : runtimes) {
        if (!(t > 0)) throw invalid_input("speedup: nonpositive runtime");
        phi[m] = base->second / t;
    }
    return phi;
}

}  // namespace jabba
