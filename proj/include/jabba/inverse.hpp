#pragma once

// Inverse symbolization: symbols -> real-valued pieces (inverse
// digitization) -> integer lengths (error-carrying quantization) -> polygonal
// chain (inverse compression).

#include <cmath>
#include <cstdint>
#include <vector>

#include "jabba/compression.hpp"
#include "jabba/core.hpp"

namespace jabba {

// A piece with a real-valued length, the intermediate of inverse digitization.
struct RealPiece {
    double len = 0.0;
    double inc = 0.0;
};

struct RealPieceSequence {
    std::vector<RealPiece> pieces;
    double anchor = 0.0;
    std::string source_id;
    std::int64_t source_length = 0;
};

// Replace every symbol by its center, un-scaled back through the stored
// ScalingParams. A zero scl makes the length axis non-invertible, so the
// per-cluster mean raw lengths recorded at fit time are used instead.
inline RealPieceSequence inverse_digitize_series(const Codebook& codebook,
                                                 const SymbolicResult::Series& series) {
    const ScalingParams& sc = codebook.scaling;
    RealPieceSequence out;
    out.anchor = series.anchor;
    out.source_id = series.id;
    out.source_length = series.source_length;
    out.pieces.reserve(series.labels.size());
    for (std::uint32_t label : series.labels) {
        if (label >= codebook.size())
            throw unknown_symbol("label " + std::to_string(label) + " not in codebook of size " +
                                 std::to_string(codebook.size()));
        const Point2& c = codebook.centers[label];
        RealPiece p;
        p.len = sc.scl > 0.0 ? c[0] * sc.sigma_len / sc.scl : codebook.mean_lengths[label];
        p.inc = c[1] * sc.sigma_inc;
        out.pieces.push_back(p);
    }
    return out;
}

inline std::vector<RealPieceSequence> inverse_digitize(const SymbolicResult& symbolic) {
    std::vector<RealPieceSequence> out;
    out.reserve(symbolic.series.size());
    for (const auto& s : symbolic.series) out.push_back(inverse_digitize_series(symbolic.codebook, s));
    return out;
}

// Error-carrying rounding of real lengths: each rounding's residual is fed
// into the next, keeping every prefix sum within 0.5 of the real prefix sum.
// A rounded length below 1 is clamped and the deficit stays in the carry.
inline std::vector<std::int64_t> quantize_lengths(const std::vector<double>& real_lens) {
    std::vector<std::int64_t> out;
    out.reserve(real_lens.size());
    double carry = 0.0;
    for (double l : real_lens) {
        std::int64_t rounded = static_cast<std::int64_t>(std::llround(l + carry));
        if (rounded < 1) rounded = 1;
        carry = l + carry - static_cast<double>(rounded);
        out.push_back(rounded);
    }
    return out;
}

namespace detail {

// force the quantized lengths to sum exactly to target, absorbing the
// residual in the last piece (cascading backwards if a length would drop
// below 1)
inline void match_total_length(std::vector<std::int64_t>& lens, std::int64_t target) {
    std::int64_t total = 0;
    for (std::int64_t l : lens) total += l;
    std::int64_t residual = target - total;
    for (std::size_t i = lens.size(); i-- > 0 && residual != 0;) {
        const std::int64_t adjusted = std::max<std::int64_t>(1, lens[i] + residual);
        residual -= adjusted - lens[i];
        lens[i] = adjusted;
    }
    if (residual != 0)
        throw invalid_piece("cannot fit " + std::to_string(lens.size()) + " pieces into " +
                            std::to_string(target) + " steps");
}

}  // namespace detail

inline TimeSeries inverse_symbolize_series(const Codebook& codebook,
                                           const SymbolicResult::Series& series) {
    const RealPieceSequence real = inverse_digitize_series(codebook, series);

    std::vector<double> real_lens;
    real_lens.reserve(real.pieces.size());
    for (const RealPiece& p : real.pieces) real_lens.push_back(p.len);
    std::vector<std::int64_t> lens = quantize_lengths(real_lens);
    detail::match_total_length(lens, series.source_length);

    PieceSequence quantized;
    quantized.anchor = real.anchor;
    quantized.source_id = real.source_id;
    quantized.source_length = real.source_length;
    quantized.pieces.reserve(lens.size());
    for (std::size_t i = 0; i < lens.size(); ++i)
        quantized.pieces.push_back(Piece{lens[i], real.pieces[i].inc});
    return inverse_compress(quantized);
}

inline std::vector<TimeSeries> inverse_symbolize(const SymbolicResult& symbolic) {
    std::vector<TimeSeries> out;
    out.reserve(symbolic.series.size());
    for (const auto& s : symbolic.series)
        out.push_back(inverse_symbolize_series(symbolic.codebook, s));
    return out;
}

// Reconstructions of a univariate-partitioned fit are stitched back into one
// series; other layouts reconstruct per member series.
inline std::vector<TimeSeries> reconstruct(const SymbolicResult& symbolic) {
    std::vector<TimeSeries> parts = inverse_symbolize(symbolic);
    if (symbolic.layout == Layout::univariate_partitioned)
        return {stitch_partitions(parts)};
    return parts;
}

}  // namespace jabba
