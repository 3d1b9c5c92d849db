// Command-line surface: symbolize, reconstruct, bench, inspect.
// Exit codes: 0 success, 2 usage error, 1 data/validation error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jabba/bench.hpp"
#include "jabba/jabba.hpp"

namespace {

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::stringstream ss(csv);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) out.push_back(std::stoi(item));
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw jabba::parse_error("cannot write \"" + path + "\"");
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw jabba::parse_error("cannot open \"" + path + "\"");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct SymbolizeArgs {
    std::string input, format = "csv-rows", backend = "ga";
    double tol = 0.1, alpha = 0.5, r = 1.0, scl = 1.0, eta = 1.0;
    std::size_t k = 8;
    int partitions = 0;
    unsigned threads = 1;
    std::uint64_t seed = 0;
    std::string model_out, out;
    bool json = false;
};

int run_symbolize(const SymbolizeArgs& a) {
    jabba::Dataset dataset = jabba::load_dataset(a.input, jabba::data_format_from_string(a.format));
    if (a.partitions > 0) {
        if (dataset.series.size() != 1)
            throw jabba::layout_error("--partitions applies to single-series input only");
        dataset = jabba::Dataset::partitioned(dataset.series.front(),
                                              static_cast<std::size_t>(a.partitions));
    }

    jabba::JabbaConfig cfg;
    cfg.compression.tol = a.tol;
    cfg.threads = a.threads;
    cfg.digitize.backend = jabba::backend_from_string(a.backend);
    cfg.digitize.scl = a.scl;
    cfg.digitize.vq.k = a.k;
    cfg.digitize.vq.r = a.r;
    cfg.digitize.vq.seed = a.seed;
    cfg.digitize.ga.alpha = a.alpha;
    cfg.digitize.auto_digitize.eta = a.eta;

    const jabba::JabbaFit fit = jabba::jabba_fit(dataset, cfg);
    const jabba::Model model{fit.symbolic.codebook, a.seed, a.tol};

    if (!a.model_out.empty()) jabba::save_model(a.model_out, model);
    const std::string payload = a.json ? jabba::symbolic_to_json(fit.symbolic, model)
                                       : jabba::symbolic_to_text(fit.symbolic);
    if (!a.out.empty())
        write_file(a.out, payload);
    else
        std::cout << payload;

    const std::int64_t n_samples =
        fit.batch.total_steps() +
        (fit.symbolic.layout == jabba::Layout::univariate_partitioned
             ? 1
             : static_cast<std::int64_t>(fit.batch.segments.size()));
    std::cerr << "symbolized " << fit.symbolic.series.size() << " segment(s), "
              << fit.batch.total_pieces() << " pieces, alphabet " << fit.symbolic.codebook.size();
    if (static_cast<std::int64_t>(fit.symbolic.codebook.size()) < n_samples)
        std::cerr << ", tau_c " << jabba::compression_rate(fit.symbolic.codebook, n_samples);
    std::cerr << "\n";
    return 0;
}

int run_reconstruct(const std::string& model_path, const std::string& symbols_path,
                    const std::string& out_path, const std::string& ref_path,
                    const std::string& ref_format) {
    const std::string text = read_file(symbols_path);
    jabba::SymbolicResult symbolic;
    if (!text.empty() && (text.front() == '{' || text.front() == '[')) {
        auto [res, model] = jabba::symbolic_from_json(text);
        symbolic = std::move(res);
        (void)model;
    } else {
        const jabba::Model model = jabba::load_model(model_path);
        symbolic = jabba::symbolic_from_text(text, model.codebook);
    }

    const std::vector<jabba::TimeSeries> recon = jabba::reconstruct(symbolic);
    std::ostringstream out;
    jabba::save_series_csv_rows(out, recon);
    if (!out_path.empty())
        write_file(out_path, out.str());
    else
        std::cout << out.str();

    if (!ref_path.empty()) {
        const jabba::Dataset ref =
            jabba::load_dataset(ref_path, jabba::data_format_from_string(ref_format));
        if (ref.series.size() == recon.size()) {
            double acc = 0.0;
            for (std::size_t i = 0; i < recon.size(); ++i) acc += jabba::mse(ref.series[i], recon[i]);
            std::cout << "mse " << acc / static_cast<double>(recon.size()) << "\n";
        } else {
            std::cerr << "warning: --ref has " << ref.series.size() << " series, reconstruction has "
                      << recon.size() << "; skipping MSE\n";
        }
    }
    return 0;
}

int run_inspect(const std::string& model_path) {
    const jabba::Model model = jabba::load_model(model_path);
    const auto& cb = model.codebook;
    std::cout << "digitizer: " << cb.digitizer_tag << "\n"
              << "alphabet:  " << cb.size() << " symbols\n"
              << "scaling:   scl=" << cb.scaling.scl << " sigma_len=" << cb.scaling.sigma_len
              << " sigma_inc=" << cb.scaling.sigma_inc << "\n"
              << "tol:       " << model.tol << "\n"
              << "seed:      " << model.seed << "\n";
    const std::size_t show = std::min<std::size_t>(cb.size(), 10);
    for (std::size_t i = 0; i < show; ++i)
        std::cout << "  " << cb.symbols[i] << " -> center (" << cb.centers[i][0] << ", "
                  << cb.centers[i][1] << "), mean len " << cb.mean_lengths[i] << "\n";
    if (cb.size() > show) std::cout << "  ... " << cb.size() - show << " more\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"joint symbolic aggregate approximation of time series"};
    app.require_subcommand(1);

    SymbolizeArgs sym;
    auto* symbolize = app.add_subcommand("symbolize", "compress + digitize series into symbols");
    symbolize->add_option("--input", sym.input, "input data file")->required();
    symbolize->add_option("--format", sym.format, "csv-rows|csv-cols|ts-lite");
    symbolize->add_option("--tol", sym.tol, "compression tolerance");
    symbolize->add_option("--backend", sym.backend, "vq|svq|ga|ga-auto|ga-hier");
    symbolize->add_option("--k", sym.k, "cluster count (vq/svq)");
    symbolize->add_option("--alpha", sym.alpha, "aggregation tolerance (ga)");
    symbolize->add_option("--r", sym.r, "sampling fraction (svq)");
    symbolize->add_option("--scl", sym.scl, "length-axis weight");
    symbolize->add_option("--eta", sym.eta, "auto-digitization eta");
    symbolize->add_option("--partitions", sym.partitions, "split a single series into m segments");
    symbolize->add_option("--threads", sym.threads, "compression workers (0 = auto)");
    symbolize->add_option("--seed", sym.seed, "RNG seed");
    symbolize->add_option("--model-out", sym.model_out, "write codebook JSON here");
    symbolize->add_option("--out", sym.out, "write symbols here (default stdout)");
    symbolize->add_flag("--json", sym.json, "emit full symbolic result as JSON");

    std::string rec_model, rec_symbols, rec_out, rec_ref, rec_ref_format = "csv-rows";
    auto* reconstruct = app.add_subcommand("reconstruct", "invert a symbols file back to series");
    reconstruct->add_option("--model", rec_model, "codebook JSON (for text symbol files)");
    reconstruct->add_option("--symbols", rec_symbols, "symbols file (text or JSON)")->required();
    reconstruct->add_option("--out", rec_out, "write reconstructed csv-rows here");
    reconstruct->add_option("--ref", rec_ref, "original input; reports MSE on stdout");
    reconstruct->add_option("--ref-format", rec_ref_format, "format of --ref");

    auto* bench = app.add_subcommand("bench", "benchmark protocols");
    bench->require_subcommand(1);

    std::size_t sweep_n = 100000;
    double sweep_tol = 0.01, sweep_alpha = 0.05;
    std::string sweep_partitions = "1,2,4,8,16,32";
    std::uint64_t sweep_seed = 42;
    std::string sweep_csv, sweep_json;
    auto* sweep = bench->add_subcommand("partition-sweep",
                                        "joint GA fits of Gaussian noise across partition counts");
    sweep->add_option("--n", sweep_n, "series length (samples)");
    sweep->add_option("--tol", sweep_tol, "compression tolerance");
    sweep->add_option("--alpha", sweep_alpha, "aggregation tolerance");
    sweep->add_option("--partitions", sweep_partitions, "comma-separated partition counts");
    sweep->add_option("--seed", sweep_seed, "noise seed");
    sweep->add_option("--out", sweep_csv, "write CSV table here");
    sweep->add_option("--json-out", sweep_json, "write per-figure JSON data here");

    std::string mv_input, mv_format = "ts-lite", mv_csv, mv_json;
    double mv_tol = 0.01, mv_eta = 1.0, mv_r = 0.5, mv_scl = 1.0;
    std::uint64_t mv_seed = 0;
    auto* multivariate =
        bench->add_subcommand("multivariate", "symbol-budget-unified comparison of 4 methods");
    multivariate->add_option("--input", mv_input, "multivariate dataset")->required();
    multivariate->add_option("--format", mv_format, "input format");
    multivariate->add_option("--tol", mv_tol, "compression tolerance");
    multivariate->add_option("--eta", mv_eta, "auto-digitization eta");
    multivariate->add_option("--r", mv_r, "sampling fraction for the joint VQ run");
    multivariate->add_option("--scl", mv_scl, "length-axis weight");
    multivariate->add_option("--seed", mv_seed, "RNG seed");
    multivariate->add_option("--out", mv_csv, "write CSV table here");
    multivariate->add_option("--json-out", mv_json, "write JSON rows here");

    std::string inspect_model;
    auto* inspect = app.add_subcommand("inspect", "print a model summary");
    inspect->add_option("--model", inspect_model, "codebook JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*symbolize) return run_symbolize(sym);
        if (*reconstruct) return run_reconstruct(rec_model, rec_symbols, rec_out, rec_ref,
                                                 rec_ref_format);
        if (*inspect) return run_inspect(inspect_model);
        if (*sweep) {
            const jabba::TimeSeries noise = jabba::gaussian_noise(sweep_n, sweep_seed);
            jabba::SweepOptions opt;
            opt.alpha = sweep_alpha;
            const jabba::BenchReport report =
                jabba::run_partition_sweep(noise, sweep_tol, parse_int_list(sweep_partitions), opt);
            std::cout << report.to_text();
            if (!sweep_csv.empty()) write_file(sweep_csv, report.to_csv());
            if (!sweep_json.empty()) write_file(sweep_json, report.to_json());
            return 0;
        }
        if (*multivariate) {
            jabba::Dataset ds =
                jabba::load_dataset(mv_input, jabba::data_format_from_string(mv_format));
            if (ds.layout == jabba::Layout::collection) {
                // promote an equal-length collection (e.g. csv-cols input)
                ds = jabba::Dataset::multivariate(std::move(ds.series));
            }
            jabba::MultivariateOptions opt;
            opt.eta = mv_eta;
            opt.sampling_r = mv_r;
            opt.scl = mv_scl;
            opt.seed = mv_seed;
            const jabba::BenchReport report = jabba::run_multivariate_protocol(ds, mv_tol, opt);
            std::cout << report.to_text();
            if (!mv_csv.empty()) write_file(mv_csv, report.to_csv());
            if (!mv_json.empty()) write_file(mv_json, report.to_json());
            return 0;
        }
    } catch (const jabba::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
