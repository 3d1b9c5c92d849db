#include <catch_amalgamated.hpp>

#include <random>

#include "jabba/digitization.hpp"
#include "jabba/inverse.hpp"
#include "oracles.hpp"

using namespace jabba;

namespace {

CompressedBatch batch_of(std::vector<std::vector<Piece>> segments) {
    CompressedBatch batch;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        PieceSequence seq;
        seq.source_id = "s" + std::to_string(s);
        seq.anchor = 0.0;
        seq.pieces = std::move(segments[s]);
        seq.source_length = seq.total_len();
        batch.segments.push_back(std::move(seq));
    }
    return batch;
}

std::vector<Piece> random_pieces(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> len(1, 12);
    std::normal_distribution<double> inc(0.0, 2.0);
    std::vector<Piece> out(n);
    for (auto& p : out) p = {len(rng), inc(rng)};
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// scaling

TEST_CASE("scl=0 wipes the length coordinate") {
    auto [points, params] = scale_pieces(random_pieces(64, 1), 0.0);
    for (const auto& p : points) CHECK(p[0] == 0.0);
    CHECK(params.scl == 0.0);
}

TEST_CASE("unit sample deviations make scaling the identity") {
    // lens {1,2,3} and incs {0,1,2} both have sample std exactly 1
    const std::vector<Piece> pieces = {{1, 0.0}, {2, 1.0}, {3, 2.0}};
    auto [points, params] = scale_pieces(pieces, 1.0);
    CHECK(params.sigma_len == 1.0);
    CHECK(params.sigma_inc == 1.0);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        CHECK(points[i][0] == double(pieces[i].len));
        CHECK(points[i][1] == pieces[i].inc);
    }
}

TEST_CASE("constant lengths fall back to sigma 1 and cluster like increments only") {
    std::vector<Piece> pieces = random_pieces(128, 2);
    for (auto& p : pieces) p.len = 5;
    auto [points, params] = scale_pieces(pieces, 1.0);
    CHECK(params.sigma_len == 1.0);

    DigitizeConfig scaled;
    scaled.backend = Backend::ga;
    scaled.ga.alpha = 0.3;
    scaled.scl = 1.0;
    DigitizeConfig inc_only = scaled;
    inc_only.scl = 0.0;
    const auto fit_scaled = digitize(batch_of({pieces}), scaled);
    const auto fit_inc_only = digitize(batch_of({pieces}), inc_only);
    CHECK(fit_scaled.series[0].labels == fit_inc_only.series[0].labels);
}

TEST_CASE("scale_pieces rejects bad input") {
    CHECK_THROWS_AS(scale_pieces({}, 1.0), invalid_input);
    CHECK_THROWS_AS(scale_pieces(random_pieces(4, 0), -1.0), invalid_input);
}

// ---------------------------------------------------------------------------
// auto alpha

TEST_CASE("auto_alpha matches the high-precision evaluation") {
    for (const auto& c : oracle::auto_alpha_cases()) {
        const double got = auto_alpha(c.n, c.N, c.tol, c.eta);
        CHECK(std::abs(got - c.alpha) <= 1e-12 * c.alpha);
    }
}

TEST_CASE("auto_alpha scales with the square root of tol") {
    const double base = auto_alpha(5000, 800, 0.02, 1.0);
    const double scaled = auto_alpha(5000, 800, 4.0 * 0.02, 1.0);
    CHECK(oracle::close(scaled, 2.0 * base, 1e-12));

    double prev = 0.0;
    for (double tol = 0.01; tol < 1.0; tol *= 1.7) {
        const double a = auto_alpha(5000, 800, tol, 1.0);
        CHECK(a > prev);
        prev = a;
    }
}

TEST_CASE("auto_alpha validates its domain") {
    CHECK_THROWS_AS(auto_alpha(100, 100, 0.1, 1.0), invalid_input);
    CHECK_THROWS_AS(auto_alpha(100, 200, 0.1, 1.0), invalid_input);
    CHECK_THROWS_AS(auto_alpha(100, 0, 0.1, 1.0), invalid_input);
    CHECK_THROWS_AS(auto_alpha(100, 10, 0.0, 1.0), invalid_input);
    CHECK_THROWS_AS(auto_alpha(100, 10, 0.1, 0.0), invalid_input);
}

// ---------------------------------------------------------------------------
// digitize

TEST_CASE("k distinct piece values under vq give exact piece recovery") {
    std::vector<Piece> pieces;
    const Piece proto[3] = {{2, 1.0}, {5, -3.0}, {9, 0.5}};
    for (int rep = 0; rep < 8; ++rep)
        for (const Piece& p : proto) pieces.push_back(p);

    DigitizeConfig cfg;
    cfg.backend = Backend::vq;
    cfg.vq.k = 3;
    cfg.vq.seed = 7;
    const auto fit = digitize(batch_of({pieces}), cfg);
    CHECK(fit.codebook.size() == 3);

    const auto real = inverse_digitize(fit);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        CHECK(real[0].pieces[i].len == Catch::Approx(double(pieces[i].len)).margin(1e-9));
        CHECK(real[0].pieces[i].inc == Catch::Approx(pieces[i].inc).margin(1e-9));
    }
}

TEST_CASE("identical series receive identical symbol strings") {
    const auto shared = random_pieces(60, 5);
    for (Backend b : {Backend::vq, Backend::sampling_vq, Backend::ga, Backend::ga_hier}) {
        DigitizeConfig cfg;
        cfg.backend = b;
        cfg.vq.k = 6;
        cfg.vq.r = 0.9;
        cfg.vq.seed = 3;
        cfg.ga.alpha = 0.4;
        const auto fit = digitize(batch_of({shared, shared}), cfg);
        REQUIRE(fit.series.size() == 2);
        CHECK(fit.series[0].labels == fit.series[1].labels);
        CHECK(fit.tokens(0) == fit.tokens(1));
    }
}

TEST_CASE("alphabet is ordered by decreasing cluster cardinality") {
    // 12 pieces near one increment level, 6 near another, 2 near a third
    std::vector<Piece> pieces;
    for (int i = 0; i < 12; ++i) pieces.push_back({1, 0.0 + 0.01 * i});
    for (int i = 0; i < 6; ++i) pieces.push_back({1, 8.0 + 0.01 * i});
    for (int i = 0; i < 2; ++i) pieces.push_back({1, -8.0 - 0.01 * i});

    DigitizeConfig cfg;
    cfg.backend = Backend::ga;
    cfg.ga.alpha = 0.5;
    cfg.scl = 0.0;
    const auto fit = digitize(batch_of({pieces}), cfg);
    REQUIRE(fit.codebook.size() == 3);
    CHECK(fit.codebook.symbols == std::vector<std::string>{"A", "B", "C"});
    const auto toks = fit.tokens(0);
    CHECK(std::count(toks.begin(), toks.end(), std::string("A")) == 12);
    CHECK(std::count(toks.begin(), toks.end(), std::string("B")) == 6);
    CHECK(std::count(toks.begin(), toks.end(), std::string("C")) == 2);
}

TEST_CASE("symbol map is a bijection") {
    DigitizeConfig cfg;
    cfg.backend = Backend::ga;
    cfg.ga.alpha = 0.25;
    const auto fit = digitize(batch_of({random_pieces(200, 9)}), cfg);
    for (std::size_t i = 0; i < fit.codebook.size(); ++i)
        CHECK(fit.codebook.index_of(fit.codebook.symbols[i]) == i);
    // decoding a token stream re-encodes to the same labels
    const auto toks = fit.tokens(0);
    for (std::size_t i = 0; i < toks.size(); ++i)
        CHECK(fit.codebook.index_of(toks[i]) == fit.series[0].labels[i]);
    CHECK_THROWS_AS(fit.codebook.index_of("no-such-token"), unknown_symbol);
}

TEST_CASE("alphabets beyond 94 clusters use rank tokens") {
    std::vector<Piece> pieces;
    for (int i = 0; i < 120; ++i) pieces.push_back({1, double(i) * 10.0});
    DigitizeConfig cfg;
    cfg.backend = Backend::ga;
    cfg.ga.alpha = 1e-6;
    cfg.scl = 0.0;
    const auto fit = digitize(batch_of({pieces}), cfg);
    REQUIRE(fit.codebook.size() == 120);
    for (const auto& s : fit.codebook.symbols) {
        REQUIRE(s.size() >= 2);
        CHECK(s[0] == '#');
    }
    CHECK(fit.codebook.index_of("#57") == 57);
}

TEST_CASE("scl=0 labels are invariant to rescaling all lengths") {
    auto pieces = random_pieces(100, 11);
    DigitizeConfig cfg;
    cfg.backend = Backend::ga;
    cfg.ga.alpha = 0.3;
    cfg.scl = 0.0;
    const auto before = digitize(batch_of({pieces}), cfg);
    for (auto& p : pieces) p.len *= 7;
    const auto after = digitize(batch_of({pieces}), cfg);
    CHECK(before.series[0].labels == after.series[0].labels);
}

TEST_CASE("hierarchical aggregation enumerates observed pairs only") {
    // two length levels x two increment levels, but only 3 pairs appear
    std::vector<Piece> pieces;
    for (int i = 0; i < 10; ++i) pieces.push_back({1, 0.0});
    for (int i = 0; i < 10; ++i) pieces.push_back({20, 0.0});
    for (int i = 0; i < 10; ++i) pieces.push_back({1, 50.0});

    DigitizeConfig cfg;
    cfg.backend = Backend::ga_hier;
    cfg.ga.alpha = 0.5;
    const auto fit = digitize(batch_of({pieces}), cfg);
    CHECK(fit.codebook.size() == 3);
    CHECK(fit.codebook.digitizer_tag == "ga-hier");
    // pieces sharing (len-group, inc-group) share a symbol
    const auto toks = fit.tokens(0);
    for (int i = 1; i < 10; ++i) {
        CHECK(toks[i] == toks[0]);
        CHECK(toks[10 + i] == toks[10]);
        CHECK(toks[20 + i] == toks[20]);
    }
}

TEST_CASE("hierarchical mode honors per-axis tolerances") {
    std::vector<Piece> pieces;
    for (int i = 0; i < 40; ++i) pieces.push_back({1 + i % 4, i % 2 ? 1.0 : -1.0});
    DigitizeConfig wide;
    wide.backend = Backend::ga_hier;
    wide.ga.alpha = 0.1;
    wide.ga.alpha_len = 100.0;  // one length group
    wide.ga.alpha_inc = 100.0;  // one increment group
    const auto fit = digitize(batch_of({pieces}), wide);
    CHECK(fit.codebook.size() == 1);
}

TEST_CASE("ga-auto derives alpha from the closed form") {
    const auto ts = oracle::walk(2000, 23);
    const auto batch = partitional_compress(Dataset::partitioned(ts, 2), {0.1, 0});
    DigitizeConfig cfg;
    cfg.backend = Backend::ga_auto;
    cfg.tol = 0.1;
    cfg.auto_digitize.eta = 1.0;
    const auto fit = digitize(batch, cfg);
    CHECK(fit.codebook.digitizer_tag == "ga-auto");
    CHECK(fit.codebook.size() >= 1);

    // the equivalent manual-alpha run agrees
    DigitizeConfig manual;
    manual.backend = Backend::ga;
    manual.ga.alpha = auto_alpha(batch.total_steps(),
                                 static_cast<std::int64_t>(batch.total_pieces()), 0.1, 1.0);
    const auto fit2 = digitize(batch, manual);
    CHECK(fit.series[0].labels == fit2.series[0].labels);
}

TEST_CASE("digitize rejects an empty batch and propagates back-end errors") {
    CHECK_THROWS_AS(digitize(CompressedBatch{}, DigitizeConfig{}), invalid_input);
    DigitizeConfig cfg;
    cfg.backend = Backend::vq;
    cfg.vq.k = 1000;
    CHECK_THROWS_AS(digitize(batch_of({random_pieces(10, 0)}), cfg), invalid_input);
}

TEST_CASE("digitize is deterministic given the seed") {
    const auto pieces = random_pieces(300, 42);
    DigitizeConfig cfg;
    cfg.backend = Backend::sampling_vq;
    cfg.vq.k = 12;
    cfg.vq.r = 0.5;
    cfg.vq.seed = 1234;
    const auto a = digitize(batch_of({pieces}), cfg);
    const auto b = digitize(batch_of({pieces}), cfg);
    CHECK(a.series[0].labels == b.series[0].labels);
    CHECK(a.codebook.centers == b.codebook.centers);
    CHECK(a.codebook.symbols == b.codebook.symbols);
}

TEST_CASE("sampling clusters that win no points keep their sample-level stats") {
    // 299 identical pieces plus one stray: the 2-center sample fit collapses
    // onto duplicates, so one center wins nothing under the full assignment
    std::vector<Piece> pieces(299, Piece{4, 1.0});
    pieces.push_back(Piece{4, 1.000001});
    DigitizeConfig cfg;
    cfg.backend = Backend::sampling_vq;
    cfg.vq.k = 2;
    cfg.vq.r = 0.5;
    cfg.vq.seed = 2;
    cfg.vq.max_iters = 5;
    const auto fit = digitize(batch_of({pieces}), cfg);
    REQUIRE(fit.codebook.size() == 2);
    // the populated cluster's center is the mean of its actual members
    std::size_t members0 = 0;
    for (auto l : fit.series[0].labels)
        if (l == 0) ++members0;
    CHECK(members0 >= 299);
    for (double ml : fit.codebook.mean_lengths) CHECK(ml == 4.0);
    const auto real = inverse_digitize(fit);
    double rec = 0.0, orig = 0.0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        rec += real[0].pieces[i].inc;
        orig += pieces[i].inc;
    }
    CHECK(oracle::close(rec, orig, 1e-9));
}

TEST_CASE("held-out symbolization reproduces a converged vq fit") {
    const auto pieces = random_pieces(150, 77);
    DigitizeConfig cfg;
    cfg.backend = Backend::vq;
    cfg.vq.k = 8;
    cfg.vq.seed = 6;
    const auto batch = batch_of({pieces});
    const auto fit = digitize(batch, cfg);
    const auto held_out = symbolize_with(fit.codebook, batch.segments[0]);
    CHECK(held_out.labels == fit.series[0].labels);
}

// ---------------------------------------------------------------------------
// compression rate

TEST_CASE("compression rate endpoints") {
    Codebook empty;
    CHECK(compression_rate(empty, 100) == 1.0);

    Codebook cb;
    for (std::size_t i = 0; i < 358; ++i) {
        cb.centers.push_back({double(i), 0.0});
        cb.symbols.push_back("#" + std::to_string(i));
        cb.mean_lengths.push_back(1.0);
    }
    CHECK(compression_rate(cb, 100000) == Catch::Approx(0.99642).margin(1e-12));

    Codebook full;
    for (std::size_t i = 0; i < 10; ++i) {
        full.centers.push_back({double(i), 0.0});
        full.symbols.push_back("#" + std::to_string(i));
        full.mean_lengths.push_back(1.0);
    }
    CHECK_THROWS_AS(compression_rate(full, 10), invalid_input);
    CHECK_THROWS_AS(compression_rate(full, 0), invalid_input);
}
