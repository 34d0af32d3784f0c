#include "cli.hpp"

#include "nesynth/engine.hpp"
#include "nesynth/error.hpp"
#include "nesynth/interpreter.hpp"
#include "nesynth/io.hpp"
#include "nesynth/search_dist.hpp"
#include "nesynth/sketch.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <optional>
#include <ostream>

namespace nesynth::cli {

namespace fs = std::filesystem;

namespace {

// Read failures are reported under the category of the file being read.
std::string read_as(const fs::path& path, ErrorCategory category) {
    try {
        return read_text_file(path);
    } catch (const Error& e) {
        throw Error(category, e.what());
    }
}

Sketch load_sketch(const fs::path& path) {
    return parse_sketch(read_as(path, ErrorCategory::Parse));
}

ConcreteProgram load_program(const fs::path& path) {
    return parse_program(read_as(path, ErrorCategory::Parse));
}

void require_arity(const Sketch& sketch, const SpecSet& spec) {
    if (sketch.arity() != spec.arity) {
        throw Error(ErrorCategory::Spec, "spec has " + std::to_string(spec.arity) +
                                             " input column(s) but '" + sketch.name +
                                             "' takes " + std::to_string(sketch.arity()));
    }
}

/// Rounds to thousandths with largest-remainder apportionment so the printed
/// values of a distribution add up to exactly 1.000.
std::vector<long> thousandths(const std::vector<double>& p) {
    constexpr long kTotal = 1000;
    std::vector<long> out(p.size());
    std::vector<double> remainder(p.size());
    long assigned = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double scaled = p[i] * kTotal;
        out[i] = static_cast<long>(std::floor(scaled));
        remainder[i] = scaled - static_cast<double>(out[i]);
        assigned += out[i];
    }
    std::vector<std::size_t> order(p.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t k = 0; assigned < kTotal && k < order.size(); ++k, ++assigned) {
        ++out[order[k]];
    }
    return out;
}

std::string token_for(HoleKind kind, std::size_t index) {
    return kind == HoleKind::Cond ? std::string(token_text(static_cast<Comparison>(index)))
                                  : std::string(token_text(static_cast<ArithOp>(index)));
}

// ---------------------------------------------------------------------------

struct TrainArgs {
    std::string sketch;
    std::string spec;
    std::string config;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
};

void cmd_train(const TrainArgs& a, std::ostream& out) {
    const Sketch sketch = load_sketch(a.sketch);
    const SpecSet spec = load_spec(a.spec);
    TrainConfig config = load_config(a.config);
    if (a.seed) {
        config.seed = *a.seed;
    }
    require_arity(sketch, spec);

    const TrainResult result = train(sketch, spec, config);

    std::error_code ec;
    fs::create_directories(a.out_dir, ec);
    if (ec) {
        throw Error(ErrorCategory::Io, "cannot create '" + a.out_dir + "': " + ec.message());
    }
    const fs::path dir(a.out_dir);
    write_text_file(dir / "loss.csv", format_loss_log(result.records, config.log_every));
    save_thetas(result.final_thetas, dir / "theta_final.json");
    save_thetas(result.best_thetas, dir / "theta_best.json");
    write_text_file(dir / "program_final.txt", print_program(result.final_program));
    write_text_file(dir / "program_best.txt", print_program(result.best_program));

    out << "best spec MSE: " << format_number(result.best_loss) << "\n";
    out << "final spec MSE: " << format_number(result.final_loss) << "\n";
}

void cmd_show(const std::string& sketch_path, const std::string& theta_path, std::ostream& out) {
    const Sketch sketch = load_sketch(sketch_path);
    const Thetas thetas = parse_thetas(read_as(theta_path, ErrorCategory::Parse), sketch);

    out << print_program(argmax_program(sketch, thetas)) << "\n";
    for (const HoleSpec& hole : sketch.holes) {
        out << "hole " << hole.index << " " << hole_token(hole.kind) << ":";
        if (const auto* cat = std::get_if<CategoricalTheta>(&thetas[hole.index])) {
            const std::vector<long> milli = thousandths(softmax(cat->logits));
            for (std::size_t k = 0; k < milli.size(); ++k) {
                char prob[32];
                std::snprintf(prob, sizeof prob, "%ld.%03ld", milli[k] / 1000, milli[k] % 1000);
                out << "  " << token_for(hole.kind, k) << " " << prob;
            }
        } else {
            const auto& g = std::get<GaussianTheta>(thetas[hole.index]);
            out << "  mu=" << format_number(g.mu) << " sigma=" << format_number(g.sigma);
        }
        out << "\n";
    }
}

void cmd_eval(const std::string& program_path, const std::string& spec_path, std::ostream& out) {
    const ConcreteProgram program = load_program(program_path);
    const SpecSet spec = load_spec(spec_path);
    require_arity(program.sketch(), spec);

    for (const SpecPair& pair : spec.pairs) {
        const double predicted = eval_program(program, pair.input);
        const double diff = predicted - pair.output;
        out << "input=(";
        for (std::size_t i = 0; i < pair.input.size(); ++i) {
            out << (i ? ", " : "") << format_number(pair.input[i]);
        }
        out << ") predicted=" << format_number(predicted) << " target="
            << format_number(pair.output) << " squared_error=" << format_number(diff * diff)
            << "\n";
    }
    out << "mse=" << format_number(eval_spec_loss(program, spec)) << "\n";
}

void cmd_enumerate(const std::string& sketch_path, const std::string& spec_path,
                   const std::vector<double>& reals, std::optional<std::size_t> top,
                   std::size_t cap, std::ostream& out) {
    const Sketch sketch = load_sketch(sketch_path);
    const SpecSet spec = load_spec(spec_path);
    require_arity(sketch, spec);
    const auto real_holes = static_cast<std::size_t>(
        std::count_if(sketch.holes.begin(), sketch.holes.end(),
                      [](const HoleSpec& h) { return !h.categorical(); }));
    if (reals.size() != real_holes) {
        throw Error(ErrorCategory::Config, "--reals has " + std::to_string(reals.size()) +
                                               " value(s) but the sketch has " +
                                               std::to_string(real_holes) + " Real hole(s)");
    }

    const std::vector<RankedAssignment> ranked = enumerate_discrete(sketch, reals, spec, cap);
    const std::size_t rows = top ? std::min(*top, ranked.size()) : ranked.size();
    out << "rank,loss,holes\n";
    for (std::size_t r = 0; r < rows; ++r) {
        out << r + 1 << "," << format_number(ranked[r].loss) << ",";
        for (const HoleSpec& hole : sketch.holes) {
            out << (hole.index ? " " : "")
                << format_hole_value(hole, ranked[r].assignment.values[hole.index]);
        }
        out << "\n";
    }
}

void cmd_gen_spec(const std::string& program_path, const std::string& inputs_path,
                  const std::string& out_path, std::ostream& out) {
    const ConcreteProgram program = load_program(program_path);
    const auto rows = parse_inputs(read_as(inputs_path, ErrorCategory::Spec));

    SpecSet spec;
    spec.arity = program.arity();
    for (const auto& row : rows) {
        if (row.size() != spec.arity) {
            throw Error(ErrorCategory::Spec, "inputs have " + std::to_string(row.size()) +
                                                 " column(s) but the program takes " +
                                                 std::to_string(spec.arity));
        }
        const double y = eval_program(program, row);
        if (!std::isfinite(y)) {
            throw Error(ErrorCategory::Runtime, "program output is not finite for an input row");
        }
        spec.pairs.push_back({row, y});
    }
    write_text_file(out_path, format_spec(spec));
    out << "wrote " << spec.pairs.size() << " example(s) to " << out_path << "\n";
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Program induction from input/output examples with natural evolution strategies",
                 "nesynth"};
    app.require_subcommand(1);

    TrainArgs train_args;
    std::uint64_t seed = 0;
    auto* train = app.add_subcommand("train", "optimize a sketch's hole distributions");
    train->add_option("--sketch", train_args.sketch, "sketch file")->required();
    train->add_option("--spec", train_args.spec, "spec CSV")->required();
    train->add_option("--config", train_args.config, "training config JSON")->required();
    train->add_option("--out", train_args.out_dir, "output directory")->required();
    auto* seed_opt = train->add_option("--seed", seed, "overrides the config seed");

    std::string sketch_path;
    std::string theta_path;
    auto* show = app.add_subcommand("show", "print the argmax program and hole distributions");
    show->add_option("--sketch", sketch_path, "sketch file")->required();
    show->add_option("--theta", theta_path, "theta JSON")->required();

    std::string program_path;
    std::string spec_path;
    auto* eval = app.add_subcommand("eval", "score a hole-free program against a spec");
    eval->add_option("--program", program_path, "program file")->required();
    eval->add_option("--spec", spec_path, "spec CSV")->required();

    std::vector<double> reals;
    std::size_t top = 0;
    std::size_t cap = kDefaultEnumerationCap;
    auto* enumerate = app.add_subcommand("enumerate", "rank every discrete hole combination");
    enumerate->add_option("--sketch", sketch_path, "sketch file")->required();
    enumerate->add_option("--spec", spec_path, "spec CSV")->required();
    enumerate->add_option("--reals", reals, "values for the Real holes, in order")
        ->delimiter(',');
    auto* top_opt = enumerate->add_option("--top", top, "print only the best N rows");
    enumerate->add_option("--cap", cap, "largest search space to enumerate");

    std::string inputs_path;
    std::string out_path;
    auto* gen = app.add_subcommand("gen-spec", "evaluate a program on input rows to build a spec");
    gen->add_option("--program", program_path, "program file")->required();
    gen->add_option("--inputs", inputs_path, "inputs CSV (in_0,...)")->required();
    gen->add_option("--out", out_path, "spec CSV to write")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "USAGE: " << e.what() << "\n";
        return kExitInput;
    }

    try {
        if (*train) {
            if (*seed_opt) {
                train_args.seed = seed;
            }
            cmd_train(train_args, out);
        } else if (*show) {
            cmd_show(sketch_path, theta_path, out);
        } else if (*eval) {
            cmd_eval(program_path, spec_path, out);
        } else if (*enumerate) {
            cmd_enumerate(sketch_path, spec_path, reals,
                          *top_opt ? std::optional<std::size_t>(top) : std::nullopt, cap, out);
        } else if (*gen) {
            cmd_gen_spec(program_path, inputs_path, out_path, out);
        }
    } catch (const Error& e) {
        err << category_name(e.category()) << ": " << e.what() << "\n";
        return e.category() == ErrorCategory::Runtime ? kExitRuntime : kExitInput;
    } catch (const std::exception& e) {
        err << "RUNTIME: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}

} // namespace nesynth::cli
