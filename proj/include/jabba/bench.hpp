#pragma once

// Benchmark harness: synthetic generators, the multivariate symbol-budget
// protocol, and the partition/thread sweep. Every emitted row re-validates
// the invariants of its run and fails loudly on violation.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "jabba/jabba.hpp"

namespace jabba {

// ---------------------------------------------------------------------------
// Synthetic generators (fixed default seeds; deterministic given the seed)

inline TimeSeries gaussian_noise(std::size_t samples, std::uint64_t seed = 42,
                                 double mean = 0.0, double stddev = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(mean, stddev);
    TimeSeries ts;
    ts.id = "gaussian-noise";
    ts.values.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) ts.values.push_back(dist(rng));
    return ts;
}

inline TimeSeries random_walk(std::size_t samples, std::uint64_t seed = 42, double step = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, step);
    TimeSeries ts;
    ts.id = "random-walk";
    ts.values.reserve(samples);
    double v = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        ts.values.push_back(v);
        v += dist(rng);
    }
    return ts;
}

struct BlobData {
    std::vector<Point2> points;
    std::vector<std::uint32_t> labels;
};

inline BlobData gaussian_blobs(std::size_t n_points, std::size_t n_blobs, std::uint64_t seed,
                               double spread = 0.4, double box = 10.0, double min_dist = 0.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> center_dist(-box, box);
    std::vector<Point2> blob_centers;
    while (blob_centers.size() < n_blobs) {
        const Point2 c{center_dist(rng), center_dist(rng)};
        bool apart = true;
        for (const auto& o : blob_centers) {
            const double dx = c[0] - o[0];
            const double dy = c[1] - o[1];
            if (dx * dx + dy * dy < min_dist * min_dist) {
                apart = false;
                break;
            }
        }
        if (apart) blob_centers.push_back(c);
    }
    std::normal_distribution<double> noise(0.0, spread);
    std::uniform_int_distribution<std::size_t> pick(0, n_blobs - 1);
    BlobData data;
    data.points.reserve(n_points);
    data.labels.reserve(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        const std::size_t b = pick(rng);
        data.points.push_back({blob_centers[b][0] + noise(rng), blob_centers[b][1] + noise(rng)});
        data.labels.push_back(static_cast<std::uint32_t>(b));
    }
    return data;
}

// ---------------------------------------------------------------------------

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <typename Fn>
double median_runtime(Fn&& fn, int repeats = 3) {
    std::vector<double> times;
    times.reserve(repeats);
    for (int i = 0; i < repeats; ++i) {
        const auto t0 = Clock::now();
        fn();
        times.push_back(seconds_since(t0));
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
}

// naive per-piece restatement of the compression inequality; fails loudly
inline void check_compression_bound(const TimeSeries& series, const PieceSequence& seq,
                                    double tol) {
    double total_dev = 0.0;
    std::size_t start = 0;
    for (const Piece& p : seq.pieces) {
        const std::size_t end = start + static_cast<std::size_t>(p.len);
        const double base = series.values[start];
        const double inc = series.values[end] - base;
        const double len = static_cast<double>(p.len);
        double dev = 0.0;
        for (std::size_t i = start; i <= end; ++i) {
            const double line = base + inc * (static_cast<double>(i - start) / len);
            const double d = line - series.values[i];
            dev += d * d;
        }
        const double bound = (len - 1.0) * tol * tol;
        if (dev > bound + 1e-9 * std::max(1.0, bound))
            throw error("bench: compression piece bound violated");
        total_dev += dev;
        start = end;
    }
    const double n = static_cast<double>(seq.source_length);
    const double N = static_cast<double>(seq.pieces.size());
    const double global = (n - N) * tol * tol;
    if (total_dev > global + 1e-9 * std::max(1.0, global))
        throw error("bench: global compression bound violated");
}

// mean-center identity restated: sum of reconstructed increments over the whole joint fit
// equals the sum of original increments
inline void check_pinned_endpoints(const CompressedBatch& batch, const SymbolicResult& symbolic) {
    double original = 0.0, reconstructed = 0.0;
    const auto real = inverse_digitize(symbolic);
    for (std::size_t s = 0; s < batch.segments.size(); ++s) {
        for (const Piece& p : batch.segments[s].pieces) original += p.inc;
        for (const RealPiece& p : real[s].pieces) reconstructed += p.inc;
    }
    if (std::abs(original - reconstructed) >
        1e-9 * std::max({1.0, std::abs(original), std::abs(reconstructed)}))
        throw error("bench: pinned-endpoint identity violated");
}

}  // namespace detail

// Spearman rank correlation (average ranks on ties).
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw invalid_input("spearman: bad input");
    auto ranks = [](const std::vector<double>& v) {
        std::vector<std::size_t> order(v.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> r(v.size());
        std::size_t i = 0;
        while (i < order.size()) {
            std::size_t j = i;
            while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
            const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
            for (std::size_t t = i; t <= j; ++t) r[order[t]] = avg;
            i = j + 1;
        }
        return r;
    };
    const auto rx = ranks(x);
    const auto ry = ranks(y);
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

// ---------------------------------------------------------------------------
// Report table

struct BenchReport {
    std::vector<BenchRow> rows;

    std::string to_csv() const {
        std::ostringstream out;
        out.precision(10);
        out << "method,partitions,threads,symbols,mse,dtw,sse,tau_c,"
               "t_compress,t_digitize,t_total,speedup\n";
        for (const auto& r : rows) {
            out << r.method << ',' << r.partitions << ',' << r.threads << ',' << r.symbols << ','
                << r.mse << ',';
            if (std::isnan(r.dtw))
                out << "";
            else
                out << r.dtw;
            out << ',' << r.sse << ',' << r.tau_c << ',' << r.t_compress << ',' << r.t_digitize
                << ',' << r.t_total << ',' << r.speedup << '\n';
        }
        return out.str();
    }

    std::string to_text() const {
        std::ostringstream out;
        out << std::left << std::setw(14) << "method" << std::right << std::setw(6) << "m"
            << std::setw(8) << "thr" << std::setw(9) << "symbols" << std::setw(13) << "mse"
            << std::setw(13) << "dtw" << std::setw(11) << "tau_c" << std::setw(12) << "t_comp"
            << std::setw(12) << "t_digit" << std::setw(9) << "phi" << '\n';
        for (const auto& r : rows) {
            out << std::left << std::setw(14) << r.method << std::right << std::setw(6)
                << r.partitions << std::setw(8) << r.threads << std::setw(9) << r.symbols
                << std::setw(13) << std::setprecision(4) << std::scientific << r.mse;
            if (std::isnan(r.dtw))
                out << std::setw(13) << "-";
            else
                out << std::setw(13) << std::setprecision(4) << std::scientific << r.dtw;
            out << std::setw(11) << std::setprecision(5) << std::fixed << r.tau_c << std::setw(12)
                << std::setprecision(4) << std::fixed << r.t_compress << std::setw(12)
                << r.t_digitize << std::setw(9) << std::setprecision(2) << std::fixed << r.speedup
                << '\n';
        }
        return out.str();
    }

    std::string to_json() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rows) {
            nlohmann::json e;
            e["method"] = r.method;
            e["partitions"] = r.partitions;
            e["threads"] = r.threads;
            e["symbols"] = r.symbols;
            e["mse"] = r.mse;
            if (!std::isnan(r.dtw)) e["dtw"] = r.dtw;
            e["sse"] = r.sse;
            e["tau_c"] = r.tau_c;
            e["t_compress"] = r.t_compress;
            e["t_digitize"] = r.t_digitize;
            e["t_total"] = r.t_total;
            e["speedup"] = r.speedup;
            arr.push_back(std::move(e));
        }
        return arr.dump(2) + "\n";
    }
};

// ---------------------------------------------------------------------------
// Multivariate protocol (symbol-budget unification): a ga-auto joint run
// fixes alpha and the total symbol count k_m; the joint VQ run gets k_m, the
// per-dimension GA runs get alpha, the per-dimension VQ runs share k_m spread
// across dimensions.

struct MultivariateOptions {
    double scl = 1.0;
    double eta = 1.0;
    double sampling_r = 0.5;
    std::uint64_t seed = 0;
    std::size_t max_iters = 300;
};

namespace detail {

// scaled-space SSE of a fit, recomputed from its own scaling and labels
inline double fit_sse(const SymbolicResult& fit, const std::vector<PieceSequence>& segments) {
    double acc = 0.0;
    for (std::size_t s = 0; s < fit.series.size(); ++s) {
        const auto& pieces = segments[s].pieces;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            const Point2 p = fit.codebook.scaling.apply(pieces[i]);
            const Point2& c = fit.codebook.centers[fit.series[s].labels[i]];
            const double dx = p[0] - c[0];
            const double dy = p[1] - c[1];
            acc += dx * dx + dy * dy;
        }
    }
    return acc;
}

}  // namespace detail

inline BenchReport run_multivariate_protocol(const Dataset& dataset, double tol,
                                             const MultivariateOptions& opt = {}) {
    if (dataset.layout != Layout::multivariate)
        throw layout_error("multivariate protocol needs a multivariate dataset");
    const std::size_t d = dataset.series.size();
    if (d == 0) throw invalid_input("empty dataset");

    CompressionConfig ccfg{tol, 0};
    CompressedBatch batch;
    const double t_compress =
        detail::median_runtime([&] { batch = partitional_compress(dataset, ccfg, 1); });
    for (std::size_t i = 0; i < d; ++i)
        detail::check_compression_bound(dataset.series[i], batch.segments[i], tol);

    std::int64_t total_samples = 0;
    for (const auto& s : dataset.series)
        total_samples += static_cast<std::int64_t>(s.values.size());

    BenchReport report;

    auto evaluate = [&](const std::string& method, const std::vector<SymbolicResult>& fits,
                        double t_digitize) {
        // fits: one joint result, or one per dimension
        std::vector<TimeSeries> recons(d);
        double sse_sum = 0.0;
        std::size_t symbols = 0;
        std::size_t dim = 0;
        for (const auto& fit : fits) {
            symbols += fit.codebook.size();
            const auto rec = inverse_symbolize(fit);
            std::vector<PieceSequence> segs(batch.segments.begin() + dim,
                                            batch.segments.begin() + dim + rec.size());
            sse_sum += detail::fit_sse(fit, segs);
            for (std::size_t s = 0; s < rec.size(); ++s) recons[dim + s] = rec[s];
            dim += rec.size();
        }
        BenchRow row;
        row.method = method;
        row.partitions = static_cast<int>(d);
        row.threads = 1;
        row.symbols = symbols;
        row.t_compress = t_compress;
        row.t_digitize = t_digitize;
        row.t_total = t_compress + t_digitize;
        double mse_acc = 0.0, dtw_acc = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            mse_acc += mse(dataset.series[i], recons[i]);
            dtw_acc += dtw(dataset.series[i], recons[i]);
        }
        row.mse = mse_acc / static_cast<double>(d);
        row.dtw = dtw_acc / static_cast<double>(d);
        row.sse = sse_sum;
        if (static_cast<std::int64_t>(symbols) >= total_samples)
            throw error("bench: alphabet larger than the dataset");
        row.tau_c = 1.0 - static_cast<double>(symbols) / static_cast<double>(total_samples);
        row.validate();
        report.rows.push_back(row);
    };

    // 1) joint GA with auto alpha fixes the budget
    DigitizeConfig ga_cfg;
    ga_cfg.backend = Backend::ga_auto;
    ga_cfg.scl = opt.scl;
    ga_cfg.tol = tol;
    ga_cfg.auto_digitize.eta = opt.eta;
    SymbolicResult joint_ga;
    const double t_ga = detail::median_runtime([&] { joint_ga = digitize(batch, ga_cfg); });
    detail::check_pinned_endpoints(batch, joint_ga);
    const double alpha = auto_alpha(batch.total_steps(),
                                    static_cast<std::int64_t>(batch.total_pieces()), tol, opt.eta);
    const std::size_t k_m = joint_ga.codebook.size();

    // 2) joint VQ (sampling k-means) with the same symbol count; the sample
    // must still hold at least k_m points
    DigitizeConfig vq_cfg;
    vq_cfg.backend = Backend::sampling_vq;
    vq_cfg.scl = opt.scl;
    vq_cfg.vq.k = k_m;
    const double n_pieces = static_cast<double>(batch.total_pieces());
    vq_cfg.vq.r = std::min(
        1.0, std::max(opt.sampling_r, (static_cast<double>(k_m) + 1.0) / n_pieces));
    vq_cfg.vq.seed = opt.seed;
    vq_cfg.vq.max_iters = opt.max_iters;
    SymbolicResult joint_vq;
    const double t_vq = detail::median_runtime([&] { joint_vq = digitize(batch, vq_cfg); });
    detail::check_pinned_endpoints(batch, joint_vq);

    // 3) per-dimension GA with the same alpha (no symbolic consistency)
    std::vector<SymbolicResult> per_dim_ga(d);
    const double t_pga = detail::median_runtime([&] {
        for (std::size_t i = 0; i < d; ++i) {
            CompressedBatch one;
            one.layout = Layout::collection;
            one.segments = {batch.segments[i]};
            DigitizeConfig c;
            c.backend = Backend::ga;
            c.scl = opt.scl;
            c.ga.alpha = alpha;
            per_dim_ga[i] = digitize(one, c);
        }
    });

    // 4) per-dimension VQ sharing the k_m budget: first k_m % d dims get the
    // extra center so the total is exactly k_m
    std::vector<SymbolicResult> per_dim_vq(d);
    const double t_pvq = detail::median_runtime([&] {
        for (std::size_t i = 0; i < d; ++i) {
            CompressedBatch one;
            one.layout = Layout::collection;
            one.segments = {batch.segments[i]};
            DigitizeConfig c;
            c.backend = Backend::vq;
            c.scl = opt.scl;
            c.vq.k = std::max<std::size_t>(1, k_m / d + (i < k_m % d ? 1 : 0));
            c.vq.k = std::min(c.vq.k, one.segments.front().pieces.size());
            c.vq.seed = opt.seed;
            c.vq.max_iters = opt.max_iters;
            per_dim_vq[i] = digitize(one, c);
        }
    });

    evaluate("abba-vq", per_dim_vq, t_pvq);
    evaluate("fabba-ga", per_dim_ga, t_pga);
    evaluate("jabba-vq", {joint_vq}, t_vq);
    evaluate("jabba-ga", {joint_ga}, t_ga);
    return report;
}

// ---------------------------------------------------------------------------
// Partition sweep: joint fits of one long series with m partitions and m
// worker threads; Phi(m) is measured on the compression phase.

struct SweepOptions {
    double scl = 1.0;
    double alpha = 0.05;           // used by the GA backend
    std::size_t k = 0;             // used instead when backend == vq
    Backend backend = Backend::ga;
    std::uint64_t seed = 0;
    int repeats = 3;
};

inline BenchReport run_partition_sweep(const TimeSeries& series, double tol,
                                       const std::vector<int>& partitions,
                                       const SweepOptions& opt = {}) {
    if (series.values.size() < 2) throw invalid_input("partition sweep: series too short");
    BenchReport report;
    std::map<int, double> compress_times;

    for (int m : partitions) {
        if (m < 1) throw invalid_partition("partition counts must be >= 1");
        const Dataset ds = Dataset::partitioned(series, static_cast<std::size_t>(m));
        CompressionConfig ccfg{tol, 0};

        CompressedBatch batch;
        const double t_compress = detail::median_runtime(
            [&] { batch = partitional_compress(ds, ccfg, static_cast<unsigned>(m)); },
            opt.repeats);

        DigitizeConfig dcfg;
        dcfg.backend = opt.backend;
        dcfg.scl = opt.scl;
        dcfg.tol = tol;
        dcfg.ga.alpha = opt.alpha;
        if (opt.backend == Backend::vq || opt.backend == Backend::sampling_vq) {
            dcfg.vq.k = opt.k;
            dcfg.vq.seed = opt.seed;
        }
        SymbolicResult symbolic;
        const double t_digitize =
            detail::median_runtime([&] { symbolic = digitize(batch, dcfg); }, opt.repeats);

        // re-validate the run's invariants before reporting it
        std::size_t offset = 0;
        for (const auto& seg : batch.segments) {
            TimeSeries part;
            part.values.assign(series.values.begin() + offset,
                               series.values.begin() + offset + seg.source_length + 1);
            detail::check_compression_bound(part, seg, tol);
            offset += static_cast<std::size_t>(seg.source_length);
        }
        detail::check_pinned_endpoints(batch, symbolic);
        const double run_sse = detail::fit_sse(symbolic, batch.segments);
        if (opt.backend == Backend::ga || opt.backend == Backend::ga_auto) {
            const double bound = opt.alpha * opt.alpha *
                                 (static_cast<double>(batch.total_pieces()) -
                                  static_cast<double>(symbolic.codebook.size()));
            if (run_sse > bound + 1e-9 * std::max(1.0, bound))
                throw error("bench: aggregation SSE bound violated");
        }

        const TimeSeries recon = reconstruct(symbolic).front();
        BenchRow row;
        row.method = std::string("jabba-") + to_string(opt.backend);
        row.partitions = m;
        row.threads = m;
        row.symbols = symbolic.codebook.size();
        row.mse = mse(series, recon);
        row.sse = run_sse;
        row.tau_c = compression_rate(symbolic.codebook,
                                     static_cast<std::int64_t>(series.values.size()));
        row.t_compress = t_compress;
        row.t_digitize = t_digitize;
        row.t_total = t_compress + t_digitize;
        compress_times[m] = t_compress;
        row.speedup = 1.0;
        report.rows.push_back(row);
    }

    if (compress_times.count(1)) {
        const auto phi = speedup(compress_times);
        for (auto& row : report.rows) row.speedup = phi.at(row.partitions);
    }
    for (const auto& row : report.rows) row.validate();
    return report;
}

}  // namespace jabba
