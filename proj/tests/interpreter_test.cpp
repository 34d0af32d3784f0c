#include "fixtures.hpp"

#include "nesynth/error.hpp"
#include "nesynth/interpreter.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <cstring>
#include <limits>

namespace nesynth {
namespace {

double eval1(const ConcreteProgram& p, double x) {
    const std::array<double, 1> in{x};
    return eval_program(p, in);
}

TEST(EvalProgram, Experiment1GroundTruthTakesGuardedBranch) {
    EXPECT_EQ(eval1(testing::exp1_truth(), 4.0), 4.2 * 4.0);
    EXPECT_DOUBLE_EQ(eval1(testing::exp1_truth(), 4.0), 16.8);
}

TEST(EvalProgram, StrictComparisonFallsThroughAtBoundary) {
    EXPECT_EQ(eval1(testing::exp1_truth(), 3.5), 3.5 * 2.1);
    EXPECT_DOUBLE_EQ(eval1(testing::exp1_truth(), 3.5), 7.35);
}

TEST(EvalProgram, DivisionByZeroPropagates) {
    const ConcreteProgram p = parse_program("fn f(x1: f32, x2: f32) -> f32 { return 2.0 / x2 - x1; }");
    const std::array<double, 2> zeros{0.0, 0.0};
    const double y = eval_program(p, zeros);
    EXPECT_TRUE(std::isinf(y));
    EXPECT_GT(y, 0.0); // (2/0) - 0 = +inf

    const std::array<double, 2> neg{0.0, -0.0};
    EXPECT_LT(eval_program(p, neg), 0.0);

    const ConcreteProgram nan = parse_program("fn f(x: f32) -> f32 { return x / x; }");
    EXPECT_TRUE(std::isnan(eval1(nan, 0.0)));
}

TEST(EvalProgram, ChainsFoldLeftWithoutPrecedence) {
    const ConcreteProgram p = parse_program("fn f(a: f32, b: f32) -> f32 { return 1.0 + a * b; }");
    const std::array<double, 2> in{2.0, 3.0};
    EXPECT_EQ(eval_program(p, in), (1.0 + 2.0) * 3.0);

    const ConcreteProgram q = parse_program("fn f(a: f32, b: f32) -> f32 { return 8.0 / a / b; }");
    EXPECT_EQ(eval_program(q, in), (8.0 / 2.0) / 3.0);
}

TEST(EvalProgram, EqualityGuardIsExact) {
    const ConcreteProgram p =
        parse_program("fn f(x: f32) -> f32 { if x == 0.1 { return 1.0; } return 0.0; }");
    EXPECT_EQ(eval1(p, 0.1), 1.0);
    EXPECT_EQ(eval1(p, std::nextafter(0.1, 1.0)), 0.0);
}

TEST(EvalProgram, ArityMismatchIsAnError) {
    const std::array<double, 2> in{1.0, 2.0};
    EXPECT_THROW(eval_program(testing::exp1_truth(), in), Error);
}

TEST(EvalProgram, DeterministicBitForBit) {
    const ConcreteProgram p = testing::exp2_learned();
    const std::array<double, 2> in{5.5, 9.4};
    const double a = eval_program(p, in);
    const double b = eval_program(p, in);
    EXPECT_EQ(std::memcmp(&a, &b, sizeof a), 0);
}

TEST(EvalSpecLoss, GroundTruthScoresZero) {
    EXPECT_EQ(eval_spec_loss(testing::exp1_truth(), testing::exp1_spec()), 0.0);
}

TEST(EvalSpecLoss, LearnedProgramMatchesDirectComputation) {
    // Independent route: the learned listing written out as arithmetic.
    const auto learned = [](double x) { return x < 2.2305248 ? 2.4594104 * x : x * 4.0324993; };
    const std::array<double, 4> xs{1.0, 2.0, 4.0, 5.0};
    const std::array<double, 4> ys{2.1, 4.2, 16.8, 21.0};
    double sum = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sum += (learned(xs[i]) - ys[i]) * (learned(xs[i]) - ys[i]);
    }
    const double expected = sum / 4.0;

    const double mse = eval_spec_loss(testing::exp1_learned(), testing::exp1_spec());
    EXPECT_DOUBLE_EQ(mse, expected);
    EXPECT_GT(mse, 0.0);
    EXPECT_NEAR(mse, 0.4491, 1e-3);
}

TEST(EvalSpecLoss, NonFinitePredictionGetsPenalty) {
    const ConcreteProgram p = parse_program("fn f(x: f32) -> f32 { return x / 0.0 - x / 0.0; }");
    EXPECT_EQ(eval_spec_loss(p, testing::exp1_spec()), kDefaultPenalty);
    EXPECT_EQ(eval_spec_loss(p, testing::exp1_spec(), 5.0), 5.0);
}

TEST(EvalSpecLoss, OverflowingSquaredErrorGetsPenalty) {
    const ConcreteProgram p = parse_program("fn f(x: f32) -> f32 { return x * 1e200; }");
    EXPECT_EQ(eval_spec_loss(p, testing::exp1_spec()), kDefaultPenalty);
}

TEST(EvalSpecLoss, EmptySpecIsAnError) {
    SpecSet empty;
    empty.arity = 1;
    EXPECT_THROW(eval_spec_loss(testing::exp1_truth(), empty), Error);
}

TEST(EvalSpecLoss, ZeroOnlyWhenEveryPredictionIsExact) {
    SpecSet spec = testing::exp1_spec();
    spec.pairs[2].output = std::nextafter(spec.pairs[2].output, 100.0);
    const double mse = eval_spec_loss(testing::exp1_truth(), spec);
    EXPECT_GT(mse, 0.0);
}

} // namespace
} // namespace nesynth
