#include <catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "jabba/io.hpp"
#include "jabba/jabba.hpp"
#include "oracles.hpp"

using namespace jabba;

namespace {

SymbolicResult small_fit(std::uint64_t seed, Backend backend = Backend::ga) {
    const auto a = oracle::walk(200, seed);
    const auto b = oracle::walk(200, seed + 1);
    JabbaConfig cfg;
    cfg.compression.tol = 0.2;
    cfg.digitize.backend = backend;
    cfg.digitize.ga.alpha = 0.5;
    cfg.digitize.vq.k = 5;
    cfg.digitize.vq.seed = seed;
    return jabba_fit(Dataset::collection({a, b}), cfg).symbolic;
}

}  // namespace

// ---------------------------------------------------------------------------
// dataset loading

TEST_CASE("csv-rows: one series per line") {
    std::istringstream in("1,2,3,4\n5,6,7\n");
    const auto ds = load_dataset(in, DataFormat::csv_rows);
    CHECK(ds.layout == Layout::collection);
    REQUIRE(ds.series.size() == 2);
    CHECK(ds.m == 2);
    CHECK(ds.series[0].values == std::vector<double>{1, 2, 3, 4});
    CHECK(ds.series[1].values == std::vector<double>{5, 6, 7});
}

TEST_CASE("csv-cols: one series per column with header") {
    std::istringstream in("left,right\n1,10\n2,20\n3,30\n");
    const auto ds = load_dataset(in, DataFormat::csv_cols);
    REQUIRE(ds.series.size() == 2);
    CHECK(ds.series[0].id == "left");
    CHECK(ds.series[1].id == "right");
    CHECK(ds.series[0].values == std::vector<double>{1, 2, 3});
    CHECK(ds.series[1].values == std::vector<double>{10, 20, 30});
}

TEST_CASE("ts-lite: dimensions of one series form a multivariate dataset") {
    std::ostringstream text;
    text << "af,0";
    for (int i = 0; i < 640; ++i) text << "," << i * 0.25;
    text << "\naf,1";
    for (int i = 0; i < 640; ++i) text << "," << i * -0.5;
    text << "\n";
    std::istringstream in(text.str());
    const auto ds = load_dataset(in, DataFormat::ts_lite);
    CHECK(ds.layout == Layout::multivariate);
    CHECK(ds.m == 2);
    REQUIRE(ds.series.size() == 2);
    CHECK(ds.series[0].values.size() == 640);
    CHECK(ds.series[0].id == "af/0");
}

TEST_CASE("non-numeric cells name their location") {
    std::istringstream in("1,2\n3,abc\n");
    try {
        load_dataset(in, DataFormat::csv_rows);
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("abc") != std::string::npos);
        CHECK(msg.find("line 2") != std::string::npos);
        CHECK(msg.find("column 2") != std::string::npos);
    }
}

TEST_CASE("ragged multivariate dimensions are a layout error") {
    std::istringstream in("s,0,1,2,3\ns,1,4,5\n");
    CHECK_THROWS_AS(load_dataset(in, DataFormat::ts_lite), layout_error);
}

TEST_CASE("empty files are rejected") {
    std::istringstream in("");
    CHECK_THROWS_AS(load_dataset(in, DataFormat::csv_rows), parse_error);
}

// ---------------------------------------------------------------------------
// model persistence

TEST_CASE("model save-load-save is byte identical") {
    const auto fit = small_fit(5);
    const Model model{fit.codebook, 42, 0.2};
    const std::string once = model_to_json(model);
    const Model loaded = model_from_json(once);
    const std::string twice = model_to_json(loaded);
    CHECK(once == twice);
    CHECK(loaded.seed == 42);
    CHECK(loaded.tol == 0.2);
    CHECK(loaded.codebook.centers == fit.codebook.centers);
    CHECK(loaded.codebook.symbols == fit.codebook.symbols);
    CHECK(loaded.codebook.mean_lengths == fit.codebook.mean_lengths);
    CHECK(loaded.codebook.scaling.sigma_len == fit.codebook.scaling.sigma_len);
}

TEST_CASE("symbolizing held-out data with a loaded model matches in-memory") {
    const auto fit = small_fit(9, Backend::vq);
    const Model model{fit.codebook, 0, 0.2};
    const Model loaded = model_from_json(model_to_json(model));

    const auto held_out = compress(oracle::walk(300, 99), {0.2, 0});
    const auto mem = symbolize_with(model.codebook, held_out);
    const auto disk = symbolize_with(loaded.codebook, held_out);
    CHECK(mem.labels == disk.labels);
}

TEST_CASE("tampered duplicate symbols are rejected on load") {
    const auto fit = small_fit(11);
    REQUIRE(fit.codebook.size() >= 2);
    nlohmann::json j = nlohmann::json::parse(model_to_json(Model{fit.codebook, 0, 0.2}));
    j["symbols"][1] = j["symbols"][0];
    CHECK_THROWS_AS(model_from_json(j.dump()), invalid_input);
}

TEST_CASE("model version mismatches are explicit errors") {
    const auto fit = small_fit(13);
    nlohmann::json j = nlohmann::json::parse(model_to_json(Model{fit.codebook, 0, 0.2}));
    j["version"] = 999;
    CHECK_THROWS_AS(model_from_json(j.dump()), version_error);
    CHECK_THROWS_AS(model_from_json("not json at all"), parse_error);
}

// ---------------------------------------------------------------------------
// symbolic result persistence

TEST_CASE("symbolic result JSON round trip is the identity") {
    const auto fit = small_fit(21);
    const Model model{fit.codebook, 7, 0.2};
    const std::string text = symbolic_to_json(fit, model);
    const auto [loaded, loaded_model] = symbolic_from_json(text);
    REQUIRE(loaded.series.size() == fit.series.size());
    for (std::size_t s = 0; s < fit.series.size(); ++s) {
        CHECK(loaded.series[s].id == fit.series[s].id);
        CHECK(loaded.series[s].anchor == fit.series[s].anchor);
        CHECK(loaded.series[s].source_length == fit.series[s].source_length);
        CHECK(loaded.series[s].labels == fit.series[s].labels);
    }
    CHECK(loaded.codebook.centers == fit.codebook.centers);
    CHECK(symbolic_to_json(loaded, loaded_model) == text);
}

TEST_CASE("symbols text round trips through the codebook") {
    const auto fit = small_fit(23);
    const std::string text = symbolic_to_text(fit);
    const auto loaded = symbolic_from_text(text, fit.codebook);
    REQUIRE(loaded.series.size() == fit.series.size());
    for (std::size_t s = 0; s < fit.series.size(); ++s) {
        CHECK(loaded.series[s].labels == fit.series[s].labels);
        CHECK(loaded.series[s].anchor == fit.series[s].anchor);
        CHECK(loaded.series[s].source_length == fit.series[s].source_length);
    }
}

TEST_CASE("unknown tokens in a symbols file are rejected") {
    const auto fit = small_fit(25);
    std::string text = symbolic_to_text(fit);
    text.insert(text.find('\n'), " @@@");
    CHECK_THROWS_AS(symbolic_from_text(text, fit.codebook), unknown_symbol);
}
