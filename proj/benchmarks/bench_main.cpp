#include "nesynth/engine.hpp"
#include "nesynth/interpreter.hpp"
#include "nesynth/io.hpp"
#include "nesynth/sketch.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace nesynth;

const char* const kSketch = R"(fn f(x: f32) -> f32
{
    if x [COND] [Real]
    {
        return [Real] [OP] x;
    }

    return x [OP] [Real];
})";

const char* const kProgram = R"(fn f(x: f32) -> f32
{
    if x > 3.5
    {
        return 4.2 * x;
    }

    return x * 2.1;
})";

SpecSet spec() { return parse_spec("in_0,out\n1,2.1\n2,4.2\n4,16.8\n5,21\n"); }

void BM_ParseSketch(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(parse_sketch(kSketch));
    }
}
BENCHMARK(BM_ParseSketch);

void BM_EvalSpecLoss(benchmark::State& state) {
    const ConcreteProgram program = parse_program(kProgram);
    const SpecSet s = spec();
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval_spec_loss(program, s));
    }
}
BENCHMARK(BM_EvalSpecLoss);

void BM_TrainStep(benchmark::State& state) {
    const Sketch sketch = parse_sketch(kSketch);
    const SpecSet s = spec();
    TrainConfig config;
    config.population = static_cast<std::size_t>(state.range(0));
    config.threads = 1;
    Thetas thetas = initial_thetas(sketch, config.sigma, config.mu_init);
    ThetaOptimizer optimizer(config);
    std::uint64_t iteration = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(train_step(sketch, s, thetas, config, ++iteration, optimizer));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrainStep)->Arg(50)->Arg(200);

void BM_EnumerateDiscrete(benchmark::State& state) {
    const Sketch sketch = parse_sketch(kSketch);
    const SpecSet s = spec();
    const std::vector<double> reals{3.5, 4.2, 2.1};
    for (auto _ : state) {
        benchmark::DoNotOptimize(enumerate_discrete(sketch, reals, s));
    }
}
BENCHMARK(BM_EnumerateDiscrete);

} // namespace

BENCHMARK_MAIN();
