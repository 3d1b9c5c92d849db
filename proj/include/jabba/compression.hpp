#pragma once

// Adaptive polygonal chain compression: a greedy left-to-right scan emits the
// longest piece whose squared deviation from the straight line through its
// endpoints stays within (len - 1) * tol^2. The whole chain is recovered
// exactly from the first value and the (len, inc) tuple sequence.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "jabba/core.hpp"
#include "jabba/parallel.hpp"

namespace jabba {

struct CompressionConfig {
    double tol = 0.1;
    std::int64_t max_piece_len = 0;  // 0 = unbounded; guard for flat series

    void validate() const {
        if (!(tol > 0.0)) throw invalid_input("compression tol must be > 0");
        if (max_piece_len < 0) throw invalid_input("max_piece_len must be >= 0");
    }
};

namespace detail {

// Compress values[first..last] (inclusive sample range) anchored at first.
inline void compress_range(const std::vector<double>& v, std::size_t first, std::size_t last,
                           const CompressionConfig& cfg, PieceSequence& out) {
    const double tol2 = cfg.tol * cfg.tol;
    std::size_t start = first;
    while (start < last) {
        const double base = v[start];
        // running sums of y, y^2, d*y with y_d = v[start+d] - base
        double s1 = 0.0, s2 = 0.0, s3 = 0.0;
        std::size_t end = start;
        for (;;) {
            const std::size_t cand = end + 1;
            if (cand > last) break;
            const double y = v[cand] - base;
            const double d = static_cast<double>(cand - start);
            const double ns1 = s1 + y;
            const double ns2 = s2 + y * y;
            const double ns3 = s3 + d * y;
            // squared deviation from the line through (start, v[start]) and
            // (cand, v[cand]): inc^2/L^2 * sum d^2 - 2 inc/L * sum d*y + sum y^2
            const double len = d;
            const double inc = y;
            const double sum_d2 = len * (len + 1.0) * (2.0 * len + 1.0) / 6.0;
            const double sq_dev = inc * inc / (len * len) * sum_d2 - 2.0 * inc / len * ns3 + ns2;
            if (sq_dev > (len - 1.0) * tol2 && cand > start + 1) break;
            end = cand;
            s1 = ns1;
            s2 = ns2;
            s3 = ns3;
            if (cfg.max_piece_len > 0 &&
                static_cast<std::int64_t>(end - start) >= cfg.max_piece_len)
                break;
        }
        out.pieces.push_back(Piece{static_cast<std::int64_t>(end - start), v[end] - base});
        start = end;
    }
}

}  // namespace detail

inline PieceSequence compress(const TimeSeries& series, const CompressionConfig& cfg) {
    cfg.validate();
    if (series.values.size() < 2)
        throw invalid_input("compression needs at least 2 samples (series \"" + series.id + "\")");
    if (!series.all_finite())
        throw invalid_input("compression input has non-finite values (series \"" + series.id + "\")");

    PieceSequence out;
    out.anchor = series.values.front();
    out.source_id = series.id;
    out.source_length = series.steps();
    detail::compress_range(series.values, 0, series.values.size() - 1, cfg, out);
    return out;
}

// Polygonal chain reconstruction: anchor, then len+1 evenly interpolated
// samples per piece (the first shared with the previous piece's end).
inline TimeSeries inverse_compress(const PieceSequence& seq) {
    if (seq.pieces.empty()) throw invalid_piece("inverse_compress: empty piece sequence");

    TimeSeries out;
    out.id = seq.source_id;
    out.values.reserve(static_cast<std::size_t>(seq.total_len()) + 1);
    out.values.push_back(seq.anchor);
    double v = seq.anchor;
    for (const Piece& p : seq.pieces) {
        if (p.len < 1) throw invalid_piece("inverse_compress: piece with len < 1");
        const double l = static_cast<double>(p.len);
        for (std::int64_t i = 1; i <= p.len; ++i)
            out.values.push_back(v + p.inc * (static_cast<double>(i) / l));
        v += p.inc;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Partitional compression (the fork point of the joint approximation)

struct CompressedBatch {
    std::vector<PieceSequence> segments;  // deterministic input order
    Layout layout = Layout::collection;

    std::size_t total_pieces() const {
        std::size_t n = 0;
        for (const auto& s : segments) n += s.pieces.size();
        return n;
    }
    std::int64_t total_steps() const {
        std::int64_t n = 0;
        for (const auto& s : segments) n += s.source_length;
        return n;
    }
    // piece-count offsets per segment, so a joint token stream splits back
    std::vector<std::size_t> boundaries() const {
        std::vector<std::size_t> b;
        b.reserve(segments.size());
        std::size_t acc = 0;
        for (const auto& s : segments) {
            acc += s.pieces.size();
            b.push_back(acc);
        }
        return b;
    }
};

namespace detail {

// Split the step range of one series into m near-equal parts (first
// length%m parts get one extra step); boundary samples are shared, so each
// part keeps the previous part's last value as its anchor.
inline std::vector<TimeSeries> split_series(const TimeSeries& ts, std::size_t m) {
    const std::int64_t n = ts.steps();
    if (m == 0) throw invalid_partition("partition count must be >= 1");
    if (static_cast<std::int64_t>(m) > n)
        throw invalid_partition("cannot split " + std::to_string(n) + " steps into " +
                                std::to_string(m) + " segments");
    std::vector<TimeSeries> parts;
    parts.reserve(m);
    const std::int64_t base = n / static_cast<std::int64_t>(m);
    const std::int64_t extra = n % static_cast<std::int64_t>(m);
    std::int64_t begin = 0;
    for (std::size_t s = 0; s < m; ++s) {
        const std::int64_t steps = base + (static_cast<std::int64_t>(s) < extra ? 1 : 0);
        TimeSeries part;
        part.id = ts.id + "[" + std::to_string(s) + "]";
        part.values.assign(ts.values.begin() + begin, ts.values.begin() + begin + steps + 1);
        parts.push_back(std::move(part));
        begin += steps;
    }
    return parts;
}

}  // namespace detail

// Partitional compression: each segment (partition of a univariate series, or one member
// series) is compressed independently with its own anchor; segments may run
// on worker threads and are joined in input order.
inline CompressedBatch partitional_compress(const Dataset& dataset, const CompressionConfig& cfg,
                                            unsigned threads = 1) {
    cfg.validate();
    if (dataset.series.empty()) throw invalid_input("empty dataset");

    std::vector<TimeSeries> segments;
    if (dataset.layout == Layout::univariate_partitioned) {
        if (dataset.series.size() != 1)
            throw layout_error("univariate-partitioned dataset must hold exactly one series");
        segments = detail::split_series(dataset.series.front(), dataset.m);
    } else {
        if (dataset.m != dataset.series.size())
            throw layout_error("dataset m does not match member count");
        if (dataset.layout == Layout::multivariate)
            for (const auto& s : dataset.series)
                if (s.values.size() != dataset.series.front().values.size())
                    throw layout_error("multivariate dataset has ragged dimensions");
        segments = dataset.series;
    }

    CompressedBatch batch;
    batch.layout = dataset.layout;
    batch.segments.resize(segments.size());
    fork_join_for(segments.size(), threads,
                  [&](std::size_t i) { batch.segments[i] = compress(segments[i], cfg); });
    return batch;
}

// Joins per-segment reconstructions of a univariate-partitioned run back into
// one series. Partition anchors are exact original values, so each boundary
// sample is taken from the following segment's (exact) start.
inline TimeSeries stitch_partitions(const std::vector<TimeSeries>& parts) {
    if (parts.empty()) throw invalid_input("stitch_partitions: no segments");
    TimeSeries out;
    out.id = parts.front().id;
    const auto bracket = out.id.find('[');
    if (bracket != std::string::npos) out.id.resize(bracket);
    for (std::size_t s = 0; s < parts.size(); ++s) {
        const auto& v = parts[s].values;
        if (v.empty()) throw invalid_input("stitch_partitions: empty segment");
        // drop this segment's last sample except for the final segment: the
        // next segment's anchor owns that grid point
        const std::size_t end = s + 1 < parts.size() ? v.size() - 1 : v.size();
        out.values.insert(out.values.end(), v.begin(), v.begin() + end);
    }
    return out;
}

}  // namespace jabba
