#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace nesynth {

// Token sets are fixed. Enumerator order is the category index used by the
// search distributions, the argmax tie-break and the enumeration order.
enum class Comparison { Equal, Greater, Less };
enum class ArithOp { Add, Sub, Mul, Div };

inline constexpr std::size_t kComparisonCount = 3;
inline constexpr std::size_t kArithOpCount = 4;

std::string_view token_text(Comparison c) noexcept;
std::string_view token_text(ArithOp op) noexcept;

enum class HoleKind { Cond, Op, Real };

std::string_view hole_token(HoleKind kind) noexcept;

struct HoleSpec {
    std::size_t index = 0;
    HoleKind kind = HoleKind::Real;

    bool categorical() const noexcept { return kind != HoleKind::Real; }
    /// Number of tokens for categorical holes, 0 for Real holes.
    std::size_t arity() const noexcept;

    friend bool operator==(const HoleSpec&, const HoleSpec&) = default;
};

struct HoleRef {
    std::size_t index = 0;
    friend bool operator==(const HoleRef&, const HoleRef&) = default;
};

struct InputRef {
    std::size_t index = 0;
    friend bool operator==(const InputRef&, const InputRef&) = default;
};

struct Literal {
    double value = 0.0;
    // Bitwise comparison keeps structural equality reflexive for NaN.
    friend bool operator==(const Literal& a, const Literal& b) noexcept;
};

using Operand = std::variant<InputRef, Literal, HoleRef>;
using ComparisonSlot = std::variant<Comparison, HoleRef>;
using OperatorSlot = std::variant<ArithOp, HoleRef>;

/// `first op1 a op2 b ...`, evaluated strictly left to right.
struct Chain {
    struct Link {
        OperatorSlot op;
        Operand rhs;
        friend bool operator==(const Link&, const Link&) = default;
    };

    Operand first;
    std::vector<Link> rest;

    friend bool operator==(const Chain&, const Chain&) = default;
};

struct Guard {
    Operand lhs;
    ComparisonSlot cmp;
    Operand rhs;
    Chain body;

    friend bool operator==(const Guard&, const Guard&) = default;
};

/// Parsed partial program: an optional guarded return followed by the
/// unconditional return. Holes are numbered in source order.
struct Sketch {
    std::string name;
    std::vector<std::string> params;
    std::optional<Guard> guard;
    Chain result;
    std::vector<HoleSpec> holes;

    std::size_t arity() const noexcept { return params.size(); }
    std::size_t hole_count() const noexcept { return holes.size(); }
    bool concrete() const noexcept { return holes.empty(); }

    friend bool operator==(const Sketch&, const Sketch&) = default;
};

/// A hole-free sketch. Only produced by instantiate() or by parsing text
/// that contains no holes.
class ConcreteProgram {
public:
    /// Throws Error(Parse) if the sketch still has holes.
    explicit ConcreteProgram(Sketch sketch);

    const Sketch& sketch() const noexcept { return sketch_; }
    std::size_t arity() const noexcept { return sketch_.arity(); }

    friend bool operator==(const ConcreteProgram&, const ConcreteProgram&) = default;

private:
    Sketch sketch_;
};

/// Category index for Cond/Op holes, value for Real holes.
using HoleValue = std::variant<std::size_t, double>;

struct Assignment {
    std::vector<HoleValue> values;
    friend bool operator==(const Assignment&, const Assignment&) = default;
};

Sketch parse_sketch(std::string_view text);

/// Parses text and requires it to contain no holes.
ConcreteProgram parse_program(std::string_view text);

ConcreteProgram instantiate(const Sketch& sketch, const Assignment& assignment);

/// Canonical layout; parse_sketch(print_program(s)) == s.
std::string print_program(const Sketch& sketch);
std::string print_program(const ConcreteProgram& program);

/// Shortest decimal that round-trips, always carrying a '.' or exponent.
std::string format_real(double value);

/// Renders a single hole value as it would appear in program text.
std::string format_hole_value(const HoleSpec& hole, const HoleValue& value);

} // namespace nesynth
