#include "nesynth/interpreter.hpp"

#include "nesynth/error.hpp"

#include <cmath>
#include <string>
#include <variant>

namespace nesynth {

namespace {

// Holes never reach this point; ConcreteProgram rejects them on construction.
double operand_value(const Operand& operand, std::span<const double> input) {
    if (const auto* ref = std::get_if<InputRef>(&operand)) {
        return input[ref->index];
    }
    return std::get<Literal>(operand).value;
}

double apply(ArithOp op, double lhs, double rhs) noexcept {
    switch (op) {
    case ArithOp::Add: return lhs + rhs;
    case ArithOp::Sub: return lhs - rhs;
    case ArithOp::Mul: return lhs * rhs;
    case ArithOp::Div: return lhs / rhs;
    }
    return std::nan("");
}

bool compare(Comparison c, double lhs, double rhs) noexcept {
    switch (c) {
    case Comparison::Equal: return lhs == rhs;
    case Comparison::Greater: return lhs > rhs;
    case Comparison::Less: return lhs < rhs;
    }
    return false;
}

double eval_chain(const Chain& chain, std::span<const double> input) {
    double acc = operand_value(chain.first, input);
    for (const auto& link : chain.rest) {
        acc = apply(std::get<ArithOp>(link.op), acc, operand_value(link.rhs, input));
    }
    return acc;
}

} // namespace

double eval_program(const ConcreteProgram& program, std::span<const double> input) {
    const Sketch& s = program.sketch();
    if (input.size() != s.arity()) {
        throw Error(ErrorCategory::Runtime,
                    "program '" + s.name + "' takes " + std::to_string(s.arity()) +
                        " input(s), got " + std::to_string(input.size()));
    }
    if (s.guard) {
        const Guard& g = *s.guard;
        if (compare(std::get<Comparison>(g.cmp), operand_value(g.lhs, input),
                    operand_value(g.rhs, input))) {
            return eval_chain(g.body, input);
        }
    }
    return eval_chain(s.result, input);
}

double eval_spec_loss(const ConcreteProgram& program, const SpecSet& spec, double penalty) {
    if (spec.pairs.empty()) {
        throw Error(ErrorCategory::Runtime, "cannot score a program against an empty spec");
    }
    double sum = 0.0;
    for (const SpecPair& pair : spec.pairs) {
        const double predicted = eval_program(program, pair.input);
        if (!std::isfinite(predicted)) {
            return penalty;
        }
        const double diff = predicted - pair.output;
        sum += diff * diff;
    }
    const double loss = sum / static_cast<double>(spec.pairs.size());
    // Finite predictions can still overflow the squared error.
    return std::isfinite(loss) ? loss : penalty;
}

} // namespace nesynth
