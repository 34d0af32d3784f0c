#include "fixtures.hpp"

#include "nesynth/error.hpp"
#include "nesynth/sketch.hpp"

#include <gtest/gtest.h>

#include <random>

namespace nesynth {
namespace {

using testing::experiment_file;

std::vector<HoleKind> kinds(const Sketch& s) {
    std::vector<HoleKind> out;
    for (const HoleSpec& h : s.holes) {
        out.push_back(h.kind);
    }
    return out;
}

TEST(ParseSketch, Experiment1SketchHasSixHolesInSourceOrder) {
    const Sketch s = testing::exp1_sketch();
    EXPECT_EQ(s.name, "synth_prog");
    EXPECT_EQ(s.arity(), 1u);
    using K = HoleKind;
    EXPECT_EQ(kinds(s), (std::vector<K>{K::Cond, K::Real, K::Real, K::Op, K::Op, K::Real}));
    for (std::size_t i = 0; i < s.hole_count(); ++i) {
        EXPECT_EQ(s.holes[i].index, i);
    }
}

TEST(ParseSketch, Experiment2SketchHasSevenHoles) {
    const Sketch s = testing::exp2_sketch();
    EXPECT_EQ(s.arity(), 2u);
    using K = HoleKind;
    EXPECT_EQ(kinds(s), (std::vector<K>{K::Cond, K::Real, K::Op, K::Op, K::Real, K::Op, K::Op}));
}

TEST(ParseSketch, HoleFreeProgramHasNoHoles) {
    const Sketch s = parse_sketch(experiment_file("exp1/ground_truth.rs"));
    EXPECT_TRUE(s.concrete());
    ASSERT_TRUE(s.guard.has_value());
    EXPECT_EQ(std::get<Comparison>(s.guard->cmp), Comparison::Greater);
    EXPECT_EQ(std::get<Literal>(s.guard->rhs).value, 3.5);
}

TEST(ParseSketch, GuardIsOptional) {
    const Sketch s = parse_sketch("fn f(a: f32, b: f32) -> f32 { return a [OP] b; }");
    EXPECT_FALSE(s.guard.has_value());
    EXPECT_EQ(s.hole_count(), 1u);
    EXPECT_EQ(std::get<InputRef>(s.result.rest[0].rhs).index, 1u);
}

TEST(ParseSketch, NegativeLiteralOnlyInOperandPosition) {
    const Sketch s = parse_sketch("fn f(x: f32) -> f32 { return x - -2.5; }");
    ASSERT_EQ(s.result.rest.size(), 1u);
    EXPECT_EQ(std::get<ArithOp>(s.result.rest[0].op), ArithOp::Sub);
    EXPECT_EQ(std::get<Literal>(s.result.rest[0].rhs).value, -2.5);
}

TEST(ParseSketch, CommentsAndWhitespaceIgnored) {
    const Sketch a = parse_sketch("fn f(x: f32) -> f32 { return x * 2.0; }");
    const Sketch b = parse_sketch("// header\nfn f ( x : f32 )->f32\n{\n  return x // tail\n * 2.0 ;\n}\n");
    EXPECT_EQ(a, b);
}

struct BadInput {
    const char* name;
    const char* text;
    std::size_t line;
    std::size_t column;
};

void PrintTo(const BadInput& bad, std::ostream* os) { *os << bad.name; }

class ParseSketchErrors : public ::testing::TestWithParam<BadInput> {};

TEST_P(ParseSketchErrors, ReportsPosition) {
    const BadInput& bad = GetParam();
    try {
        parse_sketch(bad.text);
        FAIL() << "expected a parse error for: " << bad.text;
    } catch (const ParseError& e) {
        EXPECT_EQ(e.category(), ErrorCategory::Parse);
        EXPECT_EQ(e.line(), bad.line) << e.what();
        EXPECT_EQ(e.column(), bad.column) << e.what();
    }
}

INSTANTIATE_TEST_SUITE_P(
    Grammar, ParseSketchErrors,
    ::testing::Values(
        BadInput{"OpHoleAsOperand", "fn f(x: f32) -> f32 { return [OP] * x; }", 1, 30},
        BadInput{"RealHoleAsOperator", "fn f(x: f32) -> f32 { return x [Real] x; }", 1, 32},
        BadInput{"OpHoleAsComparison", "fn f(x: f32) -> f32 { if x [OP] 1 { return x; } return x; }", 1, 28},
        BadInput{"CondHoleAsOperator", "fn f(x: f32) -> f32 { return x [COND] x; }", 1, 32},
        BadInput{"NoParameters", "fn f() -> f32 { return 1.0; }", 1, 6},
        BadInput{"UnknownVariable", "fn f(x: f32) -> f32 {\n  return y;\n}", 2, 10},
        BadInput{"MissingSemicolon", "fn f(x: f32) -> f32 { return x }", 1, 32},
        BadInput{"MissingFinalReturn", "fn f(x: f32) -> f32 { if x > 1 { return x; } }", 1, 46},
        BadInput{"TrailingTokens", "fn f(x: f32) -> f32 { return x; } extra", 1, 35},
        BadInput{"DuplicateParameter", "fn f(x: f32, x: f32) -> f32 { return x; }", 1, 14},
        BadInput{"NonF32Parameter", "fn f(x: i32) -> f32 { return x; }", 1, 9},
        BadInput{"UnknownOperator", "fn f(x: f32) -> f32 { return x % 2.0; }", 1, 32},
        BadInput{"UnknownHole", "fn f(x: f32) -> f32 { return [Foo]; }", 1, 30},
        BadInput{"NonFiniteLiteral", "fn f(x: f32) -> f32 { return 1e999; }", 1, 30}),
    [](const ::testing::TestParamInfo<BadInput>& info) { return std::string(info.param.name); });

TEST(Instantiate, Experiment1GroundTruthAssignment) {
    const Sketch s = testing::exp1_sketch();
    const Assignment a{{std::size_t{1}, 3.5, 4.2, std::size_t{2}, std::size_t{2}, 2.1}};
    const ConcreteProgram p = instantiate(s, a);

    // Ground truth differs only in the function name.
    Sketch expected = testing::exp1_truth().sketch();
    expected.name = s.name;
    EXPECT_EQ(p.sketch(), expected);
}

TEST(Instantiate, Experiment1LearnedListingIsReproducedVerbatim) {
    const Sketch s = testing::exp1_sketch();
    const Assignment a{{std::size_t{2}, 2.2305248, 2.4594104, std::size_t{2}, std::size_t{2},
                        4.0324993}};
    EXPECT_EQ(print_program(instantiate(s, a)), experiment_file("exp1/learned.rs"));
}

TEST(Instantiate, EmptyAssignmentOnConcreteSketchIsIdentity) {
    const Sketch s = parse_sketch(experiment_file("exp2/ground_truth.rs"));
    EXPECT_EQ(instantiate(s, Assignment{}).sketch(), s);
}

TEST(Instantiate, RejectsMismatchedAssignments) {
    const Sketch s = testing::exp1_sketch();
    const auto expect_runtime = [&](const Assignment& a) {
        try {
            instantiate(s, a);
            FAIL() << "expected an error";
        } catch (const Error& e) {
            EXPECT_EQ(e.category(), ErrorCategory::Runtime);
        }
    };
    expect_runtime(Assignment{{std::size_t{0}}});                                    // length
    expect_runtime(Assignment{{1.0, 3.5, 4.2, std::size_t{2}, std::size_t{2}, 2.1}}); // kind
    expect_runtime(Assignment{{std::size_t{1}, 3.5, 4.2, std::size_t{4}, std::size_t{2}, 2.1}});
    expect_runtime(Assignment{{std::size_t{3}, 3.5, 4.2, std::size_t{0}, std::size_t{2}, 2.1}});
}

TEST(ConcreteProgramTest, RejectsSketchWithHoles) {
    EXPECT_THROW(parse_program(experiment_file("exp1/sketch.rs")), Error);
}

TEST(PrintProgram, FormatsRealsAndHoles) {
    EXPECT_EQ(format_real(3.5), "3.5");
    EXPECT_EQ(format_real(2.0), "2.0");
    EXPECT_EQ(format_real(-0.0), "-0.0");
    EXPECT_EQ(format_real(1e-300), "1e-300");
    EXPECT_EQ(format_real(2.2305248), "2.2305248");
    const std::string text = print_program(testing::exp1_sketch());
    EXPECT_NE(text.find("if x [COND] [Real]"), std::string::npos) << text;
    EXPECT_NE(text.find("return x [OP] [Real];"), std::string::npos) << text;
}

TEST(PrintProgram, ExperimentListingsAreFixedPoints) {
    for (const char* file : {"exp1/sketch.rs", "exp1/ground_truth.rs", "exp1/learned.rs",
                             "exp2/sketch.rs", "exp2/ground_truth.rs", "exp2/learned.rs"}) {
        const std::string text = experiment_file(file);
        EXPECT_EQ(print_program(parse_sketch(text)), text) << file;
    }
}

TEST(PrintProgram, RoundTripOnRandomSketches) {
    std::mt19937_64 rng(20240611);
    for (int i = 0; i < 500; ++i) {
        const std::string text = testing::random_sketch_text(rng);
        const Sketch parsed = parse_sketch(text);
        const std::string printed = print_program(parsed);
        const Sketch reparsed = parse_sketch(printed);
        ASSERT_EQ(reparsed, parsed) << text << "\n---\n" << printed;
        ASSERT_EQ(print_program(reparsed), printed);
        for (std::size_t h = 0; h < parsed.hole_count(); ++h) {
            ASSERT_EQ(parsed.holes[h].index, h);
        }
    }
}

TEST(PrintProgram, HoleCountConservedByInstantiate) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        const Sketch s = parse_sketch(testing::random_sketch_text(rng));
        Assignment a;
        for (const HoleSpec& h : s.holes) {
            if (h.categorical()) {
                a.values.emplace_back(std::size_t{rng() % h.arity()});
            } else {
                a.values.emplace_back(static_cast<double>(rng() % 100) / 8.0);
            }
        }
        const ConcreteProgram p = instantiate(s, a);
        EXPECT_TRUE(p.sketch().concrete());
        EXPECT_EQ(parse_sketch(print_program(p)), p.sketch());
    }
}

} // namespace
} // namespace nesynth
