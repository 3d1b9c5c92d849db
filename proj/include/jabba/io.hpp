#pragma once

// File formats: dataset ingestion (csv-rows, csv-cols, ts-lite), JSON
// persistence for codebooks and symbolic results, and the tab-separated
// symbols format written by the CLI.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "jabba/core.hpp"
#include "jabba/digitization.hpp"

namespace jabba {

constexpr int kModelVersion = 1;

enum class DataFormat { csv_rows, csv_cols, ts_lite };

inline DataFormat data_format_from_string(const std::string& s) {
    if (s == "csv-rows") return DataFormat::csv_rows;
    if (s == "csv-cols") return DataFormat::csv_cols;
    if (s == "ts-lite") return DataFormat::ts_lite;
    throw invalid_input("unknown data format \"" + s + "\"");
}

namespace detail {

inline double parse_cell(const std::string& cell, std::size_t line, std::size_t column) {
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end > begin && (*(end - 1) == ' ' || *(end - 1) == '\t' || *(end - 1) == '\r')) --end;
    double value = 0.0;
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{} || res.ptr != end)
        throw parse_error("non-numeric cell \"" + cell + "\" at line " + std::to_string(line) +
                          ", column " + std::to_string(column));
    return value;
}

inline std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

inline std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

}  // namespace detail

inline Dataset load_dataset(std::istream& in, DataFormat format) {
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
        line = detail::strip_cr(line);
        if (!line.empty()) lines.push_back(line);
    }
    if (lines.empty()) throw parse_error("empty input");

    switch (format) {
        case DataFormat::csv_rows: {
            std::vector<TimeSeries> series;
            for (std::size_t li = 0; li < lines.size(); ++li) {
                const auto cells = detail::split(lines[li], ',');
                TimeSeries ts;
                ts.id = std::to_string(li);
                for (std::size_t ci = 0; ci < cells.size(); ++ci)
                    ts.values.push_back(detail::parse_cell(cells[ci], li + 1, ci + 1));
                series.push_back(std::move(ts));
            }
            return Dataset::collection(std::move(series));
        }
        case DataFormat::csv_cols: {
            const auto header = detail::split(lines[0], ',');
            std::vector<TimeSeries> series(header.size());
            for (std::size_t c = 0; c < header.size(); ++c) series[c].id = header[c];
            for (std::size_t li = 1; li < lines.size(); ++li) {
                const auto cells = detail::split(lines[li], ',');
                if (cells.size() != header.size())
                    throw parse_error("line " + std::to_string(li + 1) + " has " +
                                      std::to_string(cells.size()) + " cells, header has " +
                                      std::to_string(header.size()));
                for (std::size_t ci = 0; ci < cells.size(); ++ci)
                    series[ci].values.push_back(detail::parse_cell(cells[ci], li + 1, ci + 1));
            }
            return Dataset::collection(std::move(series));
        }
        case DataFormat::ts_lite: {
            // per line: series id, dimension id, comma-separated values
            std::map<std::string, std::vector<TimeSeries>> by_series;
            std::vector<std::string> series_order;
            for (std::size_t li = 0; li < lines.size(); ++li) {
                const auto cells = detail::split(lines[li], ',');
                if (cells.size() < 3)
                    throw parse_error("ts-lite line " + std::to_string(li + 1) +
                                      " needs: series id, dimension id, values...");
                TimeSeries dim;
                dim.id = cells[0] + "/" + cells[1];
                for (std::size_t ci = 2; ci < cells.size(); ++ci)
                    dim.values.push_back(detail::parse_cell(cells[ci], li + 1, ci + 1));
                if (by_series.find(cells[0]) == by_series.end()) series_order.push_back(cells[0]);
                by_series[cells[0]].push_back(std::move(dim));
            }
            if (series_order.size() == 1) {
                auto& dims = by_series[series_order.front()];
                for (const auto& d : dims)
                    if (d.values.size() != dims.front().values.size())
                        throw layout_error("ts-lite dimensions of series \"" +
                                           series_order.front() + "\" are ragged");
                return Dataset::multivariate(std::move(dims));
            }
            // several series: flatten to a collection of their dimensions
            std::vector<TimeSeries> members;
            for (const auto& sid : series_order)
                for (auto& d : by_series[sid]) members.push_back(std::move(d));
            return Dataset::collection(std::move(members));
        }
    }
    throw parse_error("unreachable");
}

inline Dataset load_dataset(const std::string& path, DataFormat format) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open \"" + path + "\"");
    return load_dataset(in, format);
}

inline void save_series_csv_rows(std::ostream& out, const std::vector<TimeSeries>& series) {
    out.precision(17);
    for (const auto& ts : series) {
        for (std::size_t i = 0; i < ts.values.size(); ++i) {
            if (i) out << ',';
            out << ts.values[i];
        }
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// Model persistence

struct Model {
    Codebook codebook;
    std::uint64_t seed = 0;
    double tol = 0.0;
};

inline nlohmann::json codebook_to_json(const Codebook& cb) {
    nlohmann::json j;
    j["scaling"] = {{"scl", cb.scaling.scl},
                    {"sigma_len", cb.scaling.sigma_len},
                    {"sigma_inc", cb.scaling.sigma_inc}};
    j["digitizer_tag"] = cb.digitizer_tag;
    auto& centers = j["centers"] = nlohmann::json::array();
    for (const auto& c : cb.centers) centers.push_back({c[0], c[1]});
    j["symbols"] = cb.symbols;
    j["mean_lengths"] = cb.mean_lengths;
    return j;
}

inline Codebook codebook_from_json(const nlohmann::json& j) {
    Codebook cb;
    cb.scaling.scl = j.at("scaling").at("scl").get<double>();
    cb.scaling.sigma_len = j.at("scaling").at("sigma_len").get<double>();
    cb.scaling.sigma_inc = j.at("scaling").at("sigma_inc").get<double>();
    cb.digitizer_tag = j.at("digitizer_tag").get<std::string>();
    for (const auto& c : j.at("centers"))
        cb.centers.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
    cb.symbols = j.at("symbols").get<std::vector<std::string>>();
    cb.mean_lengths = j.at("mean_lengths").get<std::vector<double>>();
    cb.validate();
    return cb;
}

inline std::string model_to_json(const Model& model) {
    nlohmann::json j = codebook_to_json(model.codebook);
    j["version"] = kModelVersion;
    j["seed"] = model.seed;
    j["tol"] = model.tol;
    return j.dump(2) + "\n";
}

inline Model model_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(std::string("model is not valid JSON: ") + e.what());
    }
    if (!j.contains("version") || !j.at("version").is_number_integer() ||
        j.at("version").get<int>() != kModelVersion)
        throw version_error("unsupported model version (expected " +
                            std::to_string(kModelVersion) + ")");
    Model m;
    m.codebook = codebook_from_json(j);
    m.seed = j.value("seed", std::uint64_t{0});
    m.tol = j.value("tol", 0.0);
    return m;
}

inline void save_model(const std::string& path, const Model& model) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot write \"" + path + "\"");
    out << model_to_json(model);
}

inline Model load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open \"" + path + "\"");
    std::stringstream ss;
    ss << in.rdbuf();
    return model_from_json(ss.str());
}

// ---------------------------------------------------------------------------
// Symbolic result persistence

inline std::string symbolic_to_json(const SymbolicResult& result, const Model& model) {
    nlohmann::json j;
    j["version"] = kModelVersion;
    j["model"] = nlohmann::json::parse(model_to_json(model));
    j["layout"] = to_string(result.layout);
    auto& arr = j["series"] = nlohmann::json::array();
    for (const auto& s : result.series) {
        nlohmann::json e;
        e["id"] = s.id;
        e["anchor"] = s.anchor;
        e["length"] = s.source_length;
        e["labels"] = s.labels;
        arr.push_back(std::move(e));
    }
    return j.dump(2) + "\n";
}

inline Layout layout_from_string(const std::string& s) {
    if (s == "univariate-partitioned") return Layout::univariate_partitioned;
    if (s == "multivariate") return Layout::multivariate;
    if (s == "collection") return Layout::collection;
    throw parse_error("unknown layout \"" + s + "\"");
}

inline std::pair<SymbolicResult, Model> symbolic_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(std::string("symbolic result is not valid JSON: ") + e.what());
    }
    if (!j.contains("version") || j.at("version").get<int>() != kModelVersion)
        throw version_error("unsupported symbolic result version");
    Model model;
    model.codebook = codebook_from_json(j.at("model"));
    model.seed = j.at("model").value("seed", std::uint64_t{0});
    model.tol = j.at("model").value("tol", 0.0);

    SymbolicResult result;
    result.codebook = model.codebook;
    result.layout = layout_from_string(j.at("layout").get<std::string>());
    for (const auto& e : j.at("series")) {
        SymbolicResult::Series s;
        s.id = e.at("id").get<std::string>();
        s.anchor = e.at("anchor").get<double>();
        s.source_length = e.at("length").get<std::int64_t>();
        s.labels = e.at("labels").get<std::vector<std::uint32_t>>();
        for (std::uint32_t l : s.labels)
            if (l >= result.codebook.size())
                throw unknown_symbol("label " + std::to_string(l) + " outside codebook");
        result.series.push_back(std::move(s));
    }
    return {std::move(result), std::move(model)};
}

// Tab-separated symbols: one line per series,
//   <id> \t <anchor> \t <source_length> \t <token token ...>
inline std::string symbolic_to_text(const SymbolicResult& result) {
    std::ostringstream out;
    out.precision(17);
    for (std::size_t si = 0; si < result.series.size(); ++si) {
        const auto& s = result.series[si];
        out << s.id << '\t' << s.anchor << '\t' << s.source_length << '\t';
        const auto toks = result.tokens(si);
        for (std::size_t i = 0; i < toks.size(); ++i) {
            if (i) out << ' ';
            out << toks[i];
        }
        out << '\n';
    }
    return out.str();
}

// Parses the text format back against a codebook (tokens -> labels).
inline SymbolicResult symbolic_from_text(const std::string& text, const Codebook& codebook,
                                         Layout layout = Layout::collection) {
    SymbolicResult result;
    result.codebook = codebook;
    result.layout = layout;
    std::istringstream in(text);
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        line = detail::strip_cr(line);
        if (line.empty()) continue;
        const auto fields = detail::split(line, '\t');
        if (fields.size() != 4)
            throw parse_error("symbols line " + std::to_string(line_no) +
                              ": expected <id>\\t<anchor>\\t<length>\\t<tokens>");
        SymbolicResult::Series s;
        s.id = fields[0];
        s.anchor = detail::parse_cell(fields[1], line_no, 2);
        s.source_length = static_cast<std::int64_t>(detail::parse_cell(fields[2], line_no, 3));
        std::istringstream toks(fields[3]);
        for (std::string tok; toks >> tok;)
            s.labels.push_back(static_cast<std::uint32_t>(codebook.index_of(tok)));
        result.series.push_back(std::move(s));
    }
    if (result.series.empty()) throw parse_error("empty symbols file");
    return result;
}

}  // namespace jabba
