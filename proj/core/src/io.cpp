#include "nesynth/io.hpp"

#include "nesynth/error.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace nesynth {

using nlohmann::json;

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCategory::Io, "cannot open '" + path.string() + "' for reading");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCategory::Io, "cannot open '" + path.string() + "' for writing");
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) {
        throw Error(ErrorCategory::Io, "failed writing '" + path.string() + "'");
    }
}

std::string format_number(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_cells(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) {
            return cells;
        }
        start = comma + 1;
    }
}

struct CsvLine {
    std::size_t number; // 1-based line in the file
    std::vector<std::string_view> cells;
};

std::vector<CsvLine> read_csv(std::string_view text) {
    std::vector<CsvLine> lines;
    std::size_t number = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        ++number;
        const std::string_view line = trim(text.substr(start, end - start));
        if (!line.empty()) {
            lines.push_back({number, split_cells(line)});
        }
        start = end + 1;
    }
    return lines;
}

double parse_cell(std::string_view cell, std::size_t line, std::size_t column) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (!cell.empty() && *first == '+') {
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, value);
    const std::string where = "line " + std::to_string(line) + ", column " + std::to_string(column);
    if (cell.empty() || ec != std::errc{} || ptr != last) {
        throw Error(ErrorCategory::Spec, where + ": not a number: '" + std::string(cell) + "'");
    }
    if (!std::isfinite(value)) {
        throw Error(ErrorCategory::Spec, where + ": value must be finite");
    }
    return value;
}

/// Validates `in_0,...,in_{k-1}` (plus `out` when required) and returns k.
std::size_t check_header(const CsvLine& header, bool with_output) {
    const std::size_t inputs = header.cells.size() - (with_output ? 1 : 0);
    const std::string expected_layout = with_output ? "in_0,...,in_{k-1},out" : "in_0,...,in_{k-1}";
    if (inputs == 0 || (with_output && header.cells.size() < 2)) {
        throw Error(ErrorCategory::Spec, "header must be " + expected_layout);
    }
    for (std::size_t i = 0; i < inputs; ++i) {
        if (header.cells[i] != "in_" + std::to_string(i)) {
            throw Error(ErrorCategory::Spec, "header column " + std::to_string(i + 1) +
                                                 ": expected 'in_" + std::to_string(i) +
                                                 "', found '" + std::string(header.cells[i]) +
                                                 "'");
        }
    }
    if (with_output && header.cells.back() != "out") {
        throw Error(ErrorCategory::Spec, "last header column must be 'out'");
    }
    return inputs;
}

void check_width(const CsvLine& row, std::size_t width) {
    if (row.cells.size() != width) {
        throw Error(ErrorCategory::Spec, "line " + std::to_string(row.number) + ": ragged row with " +
                                             std::to_string(row.cells.size()) +
                                             " cells, expected " + std::to_string(width));
    }
}

} // namespace

SpecSet parse_spec(std::string_view text) {
    const std::vector<CsvLine> lines = read_csv(text);
    if (lines.empty()) {
        throw Error(ErrorCategory::Spec, "spec file is empty");
    }
    SpecSet spec;
    spec.arity = check_header(lines.front(), true);
    if (lines.size() == 1) {
        throw Error(ErrorCategory::Spec, "spec file has a header but no examples");
    }
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const CsvLine& row = lines[r];
        check_width(row, spec.arity + 1);
        SpecPair pair;
        pair.input.reserve(spec.arity);
        for (std::size_t c = 0; c < spec.arity; ++c) {
            pair.input.push_back(parse_cell(row.cells[c], row.number, c + 1));
        }
        pair.output = parse_cell(row.cells.back(), row.number, spec.arity + 1);
        spec.pairs.push_back(std::move(pair));
    }
    return spec;
}

SpecSet load_spec(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const Error& e) {
        throw Error(ErrorCategory::Spec, e.what());
    }
    try {
        return parse_spec(text);
    } catch (const Error& e) {
        throw Error(ErrorCategory::Spec, path.string() + ": " + e.what());
    }
}

std::string format_spec(const SpecSet& spec) {
    std::string out;
    for (std::size_t i = 0; i < spec.arity; ++i) {
        out += "in_" + std::to_string(i) + ",";
    }
    out += "out\n";
    for (const SpecPair& pair : spec.pairs) {
        for (const double v : pair.input) {
            out += format_number(v) + ",";
        }
        out += format_number(pair.output) + "\n";
    }
    return out;
}

std::vector<std::vector<double>> parse_inputs(std::string_view text) {
    const std::vector<CsvLine> lines = read_csv(text);
    if (lines.size() < 2) {
        throw Error(ErrorCategory::Spec, "inputs file has no rows");
    }
    const std::size_t arity = check_header(lines.front(), false);
    std::vector<std::vector<double>> rows;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        check_width(lines[r], arity);
        std::vector<double> row;
        for (std::size_t c = 0; c < arity; ++c) {
            row.push_back(parse_cell(lines[r].cells[c], lines[r].number, c + 1));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Config

namespace {

[[noreturn]] void config_error(const std::string& message) {
    throw Error(ErrorCategory::Config, message);
}

double get_real(const json& v, const std::string& key) {
    if (!v.is_number()) {
        config_error("'" + key + "' must be a number");
    }
    return v.get<double>();
}

std::uint64_t get_count(const json& v, const std::string& key) {
    if (!v.is_number_unsigned()) {
        config_error("'" + key + "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::string get_string(const json& v, const std::string& key) {
    if (!v.is_string()) {
        config_error("'" + key + "' must be a string");
    }
    return v.get<std::string>();
}

} // namespace

TrainConfig parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        config_error(std::string("malformed config: ") + e.what());
    }
    if (!doc.is_object()) {
        config_error("config must be a JSON object");
    }

    TrainConfig cfg;
    for (const auto& [key, value] : doc.items()) {
        if (key == "learning_rate") {
            cfg.learning_rate = get_real(value, key);
        } else if (key == "iterations") {
            cfg.iterations = get_count(value, key);
        } else if (key == "population") {
            cfg.population = get_count(value, key);
        } else if (key == "sigma") {
            cfg.sigma = get_real(value, key);
        } else if (key == "mu_init") {
            cfg.mu_init = get_real(value, key);
        } else if (key == "seed") {
            cfg.seed = get_count(value, key);
        } else if (key == "optimizer") {
            const std::string name = get_string(value, key);
            if (name == "sgd") {
                cfg.optimizer = OptimizerKind::Sgd;
            } else if (name == "adam") {
                cfg.optimizer = OptimizerKind::Adam;
            } else {
                config_error("'optimizer' must be \"sgd\" or \"adam\"");
            }
        } else if (key == "adam_beta1") {
            cfg.adam_beta1 = get_real(value, key);
        } else if (key == "adam_beta2") {
            cfg.adam_beta2 = get_real(value, key);
        } else if (key == "adam_eps") {
            cfg.adam_eps = get_real(value, key);
        } else if (key == "categorical_score") {
            const std::string name = get_string(value, key);
            if (name == "softmax_grad") {
                cfg.categorical_score = CategoricalScore::SoftmaxGrad;
            } else if (name == "log_softmax_grad") {
                cfg.categorical_score = CategoricalScore::LogSoftmaxGrad;
            } else {
                config_error("'categorical_score' must be \"softmax_grad\" or \"log_softmax_grad\"");
            }
        } else if (key == "penalty") {
            cfg.penalty = get_real(value, key);
        } else if (key == "log_every") {
            cfg.log_every = get_count(value, key);
        } else if (key == "threads") {
            cfg.threads = get_count(value, key);
        } else {
            config_error("unknown key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

TrainConfig load_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const Error& e) {
        config_error(e.what());
    }
    return parse_config(text);
}

// ---------------------------------------------------------------------------
// Thetas

namespace {

[[noreturn]] void theta_error(std::size_t hole, const std::string& message) {
    throw Error(ErrorCategory::Parse, "theta entry " + std::to_string(hole) + ": " + message);
}

double finite_number(const json& v, std::size_t hole, const char* field) {
    if (!v.is_number()) {
        theta_error(hole, std::string("'") + field + "' must be a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        theta_error(hole, std::string("'") + field + "' must be finite");
    }
    return x;
}

void require_keys(const json& entry, std::size_t hole, std::initializer_list<const char*> keys) {
    if (entry.size() != keys.size()) {
        theta_error(hole, "unexpected or missing fields");
    }
    for (const char* key : keys) {
        if (!entry.contains(key)) {
            theta_error(hole, std::string("missing '") + key + "'");
        }
    }
}

} // namespace

std::string format_thetas(const Thetas& thetas) {
    json doc = json::array();
    for (const HoleTheta& theta : thetas) {
        if (const auto* cat = std::get_if<CategoricalTheta>(&theta)) {
            doc.push_back({{"kind", "cat"}, {"logits", cat->logits}});
        } else {
            const auto& g = std::get<GaussianTheta>(theta);
            doc.push_back({{"kind", "real"}, {"mu", g.mu}, {"sigma", g.sigma}});
        }
    }
    return doc.dump(2) + "\n";
}

Thetas parse_thetas(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCategory::Parse, std::string("malformed theta document: ") + e.what());
    }
    if (!doc.is_array()) {
        throw Error(ErrorCategory::Parse, "theta document must be a JSON array");
    }
    Thetas thetas;
    for (std::size_t h = 0; h < doc.size(); ++h) {
        const json& entry = doc[h];
        if (!entry.is_object() || !entry.contains("kind") || !entry["kind"].is_string()) {
            theta_error(h, "expected an object with a string 'kind'");
        }
        const std::string kind = entry["kind"].get<std::string>();
        if (kind == "cat") {
            require_keys(entry, h, {"kind", "logits"});
            const json& logits = entry["logits"];
            if (!logits.is_array() || logits.empty()) {
                theta_error(h, "'logits' must be a non-empty array");
            }
            CategoricalTheta cat;
            for (const json& v : logits) {
                cat.logits.push_back(finite_number(v, h, "logits"));
            }
            thetas.emplace_back(std::move(cat));
        } else if (kind == "real") {
            require_keys(entry, h, {"kind", "mu", "sigma"});
            GaussianTheta g{finite_number(entry["mu"], h, "mu"),
                            finite_number(entry["sigma"], h, "sigma")};
            if (!(g.sigma > 0.0)) {
                theta_error(h, "'sigma' must be positive");
            }
            thetas.emplace_back(g);
        } else {
            theta_error(h, "unknown kind '" + kind + "'");
        }
    }
    return thetas;
}

Thetas parse_thetas(std::string_view text, const Sketch& sketch) {
    Thetas thetas = parse_thetas(text);
    check_thetas(sketch, thetas);
    return thetas;
}

void save_thetas(const Thetas& thetas, const std::filesystem::path& path) {
    write_text_file(path, format_thetas(thetas));
}

Thetas load_thetas(const std::filesystem::path& path) {
    return parse_thetas(read_text_file(path));
}

Thetas load_thetas(const std::filesystem::path& path, const Sketch& sketch) {
    return parse_thetas(read_text_file(path), sketch);
}

// ---------------------------------------------------------------------------

std::string format_loss_log(std::span<const TrainRecord> records, std::size_t log_every) {
    std::string out = "iteration,mean_population_loss,argmax_loss,best_so_far_loss\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        const TrainRecord& r = records[i];
        if (r.iteration % log_every != 0 && i + 1 != records.size()) {
            continue;
        }
        out += std::to_string(r.iteration) + "," + format_number(r.mean_population_loss) + "," +
               format_number(r.argmax_loss) + "," + format_number(r.best_so_far_loss) + "\n";
    }
    return out;
}

} // namespace nesynth
