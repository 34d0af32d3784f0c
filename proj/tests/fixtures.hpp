#pragma once

#include "nesynth/io.hpp"
#include "nesynth/sketch.hpp"

#include <random>
#include <string>

namespace nesynth::testing {

inline std::string experiment_file(const std::string& relative) {
    return read_text_file(std::string(NESYNTH_EXPERIMENTS_DIR) + "/" + relative);
}

inline Sketch exp1_sketch() { return parse_sketch(experiment_file("exp1/sketch.rs")); }
inline Sketch exp2_sketch() { return parse_sketch(experiment_file("exp2/sketch.rs")); }
inline ConcreteProgram exp1_truth() { return parse_program(experiment_file("exp1/ground_truth.rs")); }
inline ConcreteProgram exp2_truth() { return parse_program(experiment_file("exp2/ground_truth.rs")); }
inline ConcreteProgram exp1_learned() { return parse_program(experiment_file("exp1/learned.rs")); }
inline ConcreteProgram exp2_learned() { return parse_program(experiment_file("exp2/learned.rs")); }

inline SpecSet exp1_spec() {
    return parse_spec("in_0,out\n1.0,2.1\n2.0,4.2\n4.0,16.8\n5.0,21.0\n");
}

inline SpecSet exp2_spec() {
    return parse_spec(
        "in_0,in_1,out\n5.8,2.5,14.1\n5.0,6.2,-4.677419\n7.4,6.1,20.9\n5.5,9.4,-5.287234\n");
}

/// Random grammar-valid sketch text. Mixes holes, literals (some negative or
/// in exponent form), comments and irregular whitespace.
inline std::string random_sketch_text(std::mt19937_64& rng) {
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
    auto chance = [&](double p) { return std::bernoulli_distribution(p)(rng); };

    const std::size_t arity = 1 + pick(4);
    std::vector<std::string> params;
    for (std::size_t i = 0; i < arity; ++i) {
        params.push_back(i == 0 && chance(0.5) ? "x" : "v" + std::to_string(i));
    }
    auto ws = [&]() -> std::string {
        switch (pick(5)) {
        case 0: return "  ";
        case 1: return "\n\t";
        case 2: return " // note\n ";
        default: return " ";
        }
    };
    auto literal = [&]() -> std::string {
        std::uniform_real_distribution<double> value(-50.0, 50.0);
        switch (pick(4)) {
        case 0: return std::to_string(pick(100));
        case 1: return format_real(value(rng));
        case 2: return "2.5e-3";
        default: return "1.25";
        }
    };
    auto operand = [&]() -> std::string {
        switch (pick(3)) {
        case 0: return params[pick(params.size())];
        case 1: return literal();
        default: return "[Real]";
        }
    };
    auto op = [&]() -> std::string {
        static const char* const ops[] = {"+", "-", "*", "/", "[OP]"};
        return ops[pick(5)];
    };
    auto cmp = [&]() -> std::string {
        static const char* const cmps[] = {"==", ">", "<", "[COND]"};
        return cmps[pick(4)];
    };
    auto chain = [&]() {
        std::string s = operand();
        const std::size_t links = pick(4);
        for (std::size_t i = 0; i < links; ++i) {
            s += ws() + op() + ws() + operand();
        }
        return s;
    };

    std::string text = "fn" + ws() + "f" + std::to_string(pick(1000)) + "(";
    for (std::size_t i = 0; i < arity; ++i) {
        text += (i ? "," + ws() : "") + params[i] + ": f32";
    }
    text += ")" + ws() + "->" + ws() + "f32" + ws() + "{" + ws();
    if (chance(0.7)) {
        text += "if " + operand() + ws() + cmp() + ws() + operand() + ws() + "{" + ws() +
                "return " + chain() + ";" + ws() + "}" + ws();
    }
    text += "return " + chain() + ";" + ws() + "}";
    return text;
}

} // namespace nesynth::testing
