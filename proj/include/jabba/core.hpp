#pragma once

// Core domain types shared by every jabba module. All types are immutable
// value types after construction and safe to share across threads read-only.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace jabba {

// ---------------------------------------------------------------------------
// Errors

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct invalid_input : error { using error::error; };
struct invalid_piece : error { using error::error; };
struct invalid_partition : error { using error::error; };
struct unknown_symbol : error { using error::error; };
struct parse_error : error { using error::error; };
struct layout_error : error { using error::error; };
struct version_error : error { using error::error; };

// ---------------------------------------------------------------------------
// Time series

struct TimeSeries {
    std::vector<double> values;
    std::string id;

    TimeSeries() = default;
    TimeSeries(std::vector<double> v, std::string label = {})
        : values(std::move(v)), id(std::move(label)) {}

    // number of unit time steps spanned by the series (samples - 1)
    std::int64_t steps() const {
        return values.empty() ? 0 : static_cast<std::int64_t>(values.size()) - 1;
    }

    bool all_finite() const {
        for (double v : values)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

enum class Layout { univariate_partitioned, multivariate, collection };

inline const char* to_string(Layout l) {
    switch (l) {
        case Layout::univariate_partitioned: return "univariate-partitioned";
        case Layout::multivariate: return "multivariate";
        case Layout::collection: return "collection";
    }
    return "?";
}

// A dataset is either one series to be split into m partitions, or m member
// series (dimensions of one multivariate series, or a plain collection).
struct Dataset {
    std::vector<TimeSeries> series;
    Layout layout = Layout::collection;
    std::size_t m = 0;

    static Dataset partitioned(TimeSeries ts, std::size_t partitions) {
        Dataset d;
        d.series.push_back(std::move(ts));
        d.layout = Layout::univariate_partitioned;
        d.m = partitions;
        return d;
    }

    static Dataset multivariate(std::vector<TimeSeries> dims) {
        Dataset d;
        d.series = std::move(dims);
        d.layout = Layout::multivariate;
        d.m = d.series.size();
        for (const auto& s : d.series)
            if (s.values.size() != d.series.front().values.size())
                throw layout_error("multivariate dataset has ragged dimensions");
        return d;
    }

    static Dataset collection(std::vector<TimeSeries> members) {
        Dataset d;
        d.series = std::move(members);
        d.layout = Layout::collection;
        d.m = d.series.size();
        return d;
    }
};

// ---------------------------------------------------------------------------
// Compression output

struct Piece {
    std::int64_t len = 0;  // time steps, >= 1
    double inc = 0.0;      // value change over the piece
};

struct PieceSequence {
    std::vector<Piece> pieces;
    double anchor = 0.0;            // first value of the source segment
    std::string source_id;
    std::int64_t source_length = 0; // steps in the source segment (sum of lens)

    std::int64_t total_len() const {
        std::int64_t s = 0;
        for (const auto& p : pieces) s += p.len;
        return s;
    }
};

// ---------------------------------------------------------------------------
// Digitization types

struct ScalingParams {
    double scl = 1.0;
    double sigma_len = 1.0;  // > 0, degenerate stds replaced by 1
    double sigma_inc = 1.0;  // > 0

    std::array<double, 2> apply(const Piece& p) const {
        return {scl * static_cast<double>(p.len) / sigma_len, p.inc / sigma_inc};
    }
};

// Symbolic centers plus everything needed to symbolize new pieces and to
// invert symbols back to pieces. Centers live in scaled (len, inc) space.
struct Codebook {
    std::vector<std::array<double, 2>> centers;
    std::vector<std::string> symbols;      // pairwise distinct, one per center
    std::vector<double> mean_lengths;      // per-cluster mean raw length
    ScalingParams scaling;
    std::string digitizer_tag;

    std::size_t size() const { return centers.size(); }

    // nearest center in scaled space, ties broken by lowest index
    std::size_t nearest(const std::array<double, 2>& q) const {
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < centers.size(); ++i) {
            const double dx = centers[i][0] - q[0];
            const double dy = centers[i][1] - q[1];
            const double d = dx * dx + dy * dy;
            if (d < best_d) {
                best_d = d;
                best = i;
            }
        }
        return best;
    }

    std::size_t index_of(const std::string& token) const {
        for (std::size_t i = 0; i < symbols.size(); ++i)
            if (symbols[i] == token) return i;
        throw unknown_symbol("token not in codebook alphabet: \"" + token + "\"");
    }

    void validate() const {
        if (centers.size() != symbols.size() || centers.size() != mean_lengths.size())
            throw invalid_input("codebook: centers/symbols/mean_lengths size mismatch");
        if (scaling.sigma_len <= 0 || scaling.sigma_inc <= 0)
            throw invalid_input("codebook: scaling sigmas must be positive");
        for (const auto& c : centers)
            if (!std::isfinite(c[0]) || !std::isfinite(c[1]))
                throw invalid_input("codebook: non-finite center");
        for (std::size_t i = 0; i < symbols.size(); ++i)
            for (std::size_t j = i + 1; j < symbols.size(); ++j)
                if (symbols[i] == symbols[j])
                    throw invalid_input("codebook: duplicate symbol \"" + symbols[i] + "\"");
    }
};

// Token for cluster rank r: single printable characters starting at 'A'
// (wrapping through the 94 printable non-space ASCII chars) while the
// alphabet fits, "#<rank>" strings otherwise.
inline std::string symbol_token(std::size_t rank, std::size_t alphabet_size) {
    if (alphabet_size <= 94) {
        const int code = rank < 62 ? 65 + static_cast<int>(rank)        // 'A'..'~'
                                   : 33 + static_cast<int>(rank) - 62;  // '!'..'@'
        return std::string(1, static_cast<char>(code));
    }
    return "#" + std::to_string(rank);
}

// Per-series symbolization output of one joint fit.
struct SymbolicResult {
    struct Series {
        std::string id;
        double anchor = 0.0;
        std::int64_t source_length = 0;
        std::vector<std::uint32_t> labels;  // cluster id per piece
    };

    Codebook codebook;
    std::vector<Series> series;
    Layout layout = Layout::collection;

    std::vector<std::string> tokens(std::size_t series_idx) const {
        const auto& s = series.at(series_idx);
        std::vector<std::string> out;
        out.reserve(s.labels.size());
        for (std::uint32_t l : s.labels) out.push_back(codebook.symbols.at(l));
        return out;
    }
};

// ---------------------------------------------------------------------------
// Benchmark reporting

struct BenchRow {
    std::string method;
    double mse = 0.0;
    double dtw = std::numeric_limits<double>::quiet_NaN();  // NaN when not measured
    double sse = 0.0;
    double tau_c = 1.0;
    double t_compress = 0.0;   // seconds
    double t_digitize = 0.0;
    double t_total = 0.0;
    int threads = 1;
    int partitions = 1;
    double speedup = 1.0;      // Phi(m) on the compression phase
    std::size_t symbols = 0;

    void validate() const {
        if (mse < 0 || sse < 0) throw invalid_input("bench row: negative metric");
        if (!(tau_c > 0.0 && tau_c <= 1.0)) throw invalid_input("bench row: tau_c outside (0,1]");
        if (!std::isnan(dtw) && dtw < 0) throw invalid_input("bench row: negative dtw");
    }
};

}  // namespace jabba
