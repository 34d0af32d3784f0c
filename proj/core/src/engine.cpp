#include "nesynth/engine.hpp"

#include "nesynth/error.hpp"
#include "nesynth/random.hpp"

#include <tbb/blocked_range.h>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace nesynth {

void TrainConfig::validate() const {
    auto fail = [](const std::string& message) { throw Error(ErrorCategory::Config, message); };
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        fail("learning_rate must be a positive finite number");
    }
    if (iterations < 1) {
        fail("iterations must be at least 1");
    }
    if (population < 2) {
        fail("population must be at least 2");
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        fail("sigma must be a positive finite number");
    }
    if (!std::isfinite(mu_init)) {
        fail("mu_init must be finite");
    }
    if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0)) {
        fail("adam_beta1 must lie in [0, 1)");
    }
    if (!(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
        fail("adam_beta2 must lie in [0, 1)");
    }
    if (!(adam_eps > 0.0)) {
        fail("adam_eps must be positive");
    }
    if (!(penalty > 0.0) || !std::isfinite(penalty)) {
        fail("penalty must be a positive finite number");
    }
    if (log_every < 1) {
        fail("log_every must be at least 1");
    }
}

std::vector<PopulationMember> sample_population(const Thetas& thetas, std::size_t size,
                                                std::uint64_t seed, std::uint64_t iteration) {
    std::vector<std::vector<double>> probabilities(thetas.size());
    for (std::size_t h = 0; h < thetas.size(); ++h) {
        if (const auto* cat = std::get_if<CategoricalTheta>(&thetas[h])) {
            probabilities[h] = softmax(cat->logits);
        }
    }

    std::vector<PopulationMember> population(size);
    for (std::size_t c = 0; c < size; ++c) {
        PopulationMember& member = population[c];
        member.assignment.values.reserve(thetas.size());
        member.draws.reserve(thetas.size());
        for (std::size_t h = 0; h < thetas.size(); ++h) {
            SplitMix64 rng = substream(seed, iteration, c, h);
            if (const auto* gauss = std::get_if<GaussianTheta>(&thetas[h])) {
                const double eps = sample_standard_normal(rng);
                member.draws.emplace_back(eps);
                member.assignment.values.emplace_back(gauss->mu + gauss->sigma * eps);
            } else {
                const std::size_t index = sample_index(probabilities[h], rng);
                member.draws.emplace_back(index);
                member.assignment.values.emplace_back(index);
            }
        }
    }
    return population;
}

Assignment argmax_assignment(const Thetas& thetas) {
    Assignment out;
    out.values.reserve(thetas.size());
    for (const HoleTheta& theta : thetas) {
        if (const auto* cat = std::get_if<CategoricalTheta>(&theta)) {
            // max_element returns the first maximum, i.e. the lowest index.
            const auto best = std::max_element(cat->logits.begin(), cat->logits.end());
            out.values.emplace_back(static_cast<std::size_t>(best - cat->logits.begin()));
        } else {
            out.values.emplace_back(std::get<GaussianTheta>(theta).mu);
        }
    }
    return out;
}

ConcreteProgram argmax_program(const Sketch& sketch, const Thetas& thetas) {
    check_thetas(sketch, thetas);
    return instantiate(sketch, argmax_assignment(thetas));
}

// ---------------------------------------------------------------------------

ThetaOptimizer::ThetaOptimizer(const TrainConfig& config)
    : kind_(config.optimizer), learning_rate_(config.learning_rate),
      beta1_(config.adam_beta1), beta2_(config.adam_beta2), eps_(config.adam_eps) {}

void ThetaOptimizer::step(Thetas& thetas, std::span<const std::vector<double>> gradient) {
    if (gradient.size() != thetas.size()) {
        throw Error(ErrorCategory::Runtime, "gradient does not match the number of holes");
    }
    ++steps_;
    if (kind_ == OptimizerKind::Adam && first_moment_.empty()) {
        for (const auto& g : gradient) {
            first_moment_.emplace_back(g.size(), 0.0);
            second_moment_.emplace_back(g.size(), 0.0);
        }
    }
    const double bias1 = 1.0 - std::pow(beta1_, static_cast<double>(steps_));
    const double bias2 = 1.0 - std::pow(beta2_, static_cast<double>(steps_));

    auto direction = [&](std::size_t hole, std::size_t k) {
        const double g = gradient[hole][k];
        if (kind_ == OptimizerKind::Sgd) {
            return g;
        }
        double& m = first_moment_[hole][k];
        double& v = second_moment_[hole][k];
        m = beta1_ * m + (1.0 - beta1_) * g;
        v = beta2_ * v + (1.0 - beta2_) * g * g;
        return (m / bias1) / (std::sqrt(v / bias2) + eps_);
    };

    for (std::size_t h = 0; h < thetas.size(); ++h) {
        if (auto* cat = std::get_if<CategoricalTheta>(&thetas[h])) {
            if (gradient[h].size() != cat->logits.size()) {
                throw Error(ErrorCategory::Runtime, "categorical gradient has the wrong length");
            }
            for (std::size_t k = 0; k < cat->logits.size(); ++k) {
                cat->logits[k] += learning_rate_ * direction(h, k);
            }
        } else {
            if (gradient[h].size() != 1) {
                throw Error(ErrorCategory::Runtime, "Gaussian gradient must have one entry");
            }
            std::get<GaussianTheta>(thetas[h]).mu += learning_rate_ * direction(h, 0);
        }
    }
}

// ---------------------------------------------------------------------------

namespace {

void score_population(const Sketch& sketch, const SpecSet& spec, const TrainConfig& config,
                      std::vector<PopulationMember>& population) {
    auto score = [&](std::size_t c) {
        PopulationMember& m = population[c];
        m.loss = eval_spec_loss(instantiate(sketch, m.assignment), spec, config.penalty);
    };
    if (config.threads == 1) {
        for (std::size_t c = 0; c < population.size(); ++c) {
            score(c);
        }
        return;
    }
    // Each candidate writes only its own slot, so the result does not depend
    // on scheduling.
    const int concurrency = config.threads == 0 ? tbb::task_arena::automatic
                                                : static_cast<int>(config.threads);
    tbb::task_arena arena(concurrency);
    arena.execute([&] {
        tbb::parallel_for(tbb::blocked_range<std::size_t>(0, population.size()),
                          [&](const tbb::blocked_range<std::size_t>& range) {
                              for (std::size_t c = range.begin(); c != range.end(); ++c) {
                                  score(c);
                              }
                          });
    });
}

} // namespace

StepOutcome train_step(const Sketch& sketch, const SpecSet& spec, Thetas& thetas,
                       const TrainConfig& config, std::uint64_t iteration,
                       ThetaOptimizer& optimizer) {
    check_thetas(sketch, thetas);
    StepOutcome out;
    out.population = sample_population(thetas, config.population, config.seed, iteration);
    score_population(sketch, spec, config, out.population);

    std::vector<double> losses;
    losses.reserve(out.population.size());
    for (const PopulationMember& m : out.population) {
        losses.push_back(m.loss);
    }
    double total = 0.0;
    for (const double l : losses) {
        total += l;
    }
    out.mean_population_loss = total / static_cast<double>(losses.size());

    const std::vector<double> fitness = standardize_fitness(losses);
    for (std::size_t c = 0; c < out.population.size(); ++c) {
        out.population[c].fitness = fitness[c];
    }

    out.gradient.resize(thetas.size());
    for (std::size_t h = 0; h < thetas.size(); ++h) {
        if (const auto* cat = std::get_if<CategoricalTheta>(&thetas[h])) {
            std::vector<CategoricalSample> samples;
            samples.reserve(out.population.size());
            for (const PopulationMember& m : out.population) {
                samples.push_back({std::get<std::size_t>(m.draws[h]), m.fitness});
            }
            out.gradient[h] = categorical_gradient(*cat, samples, config.categorical_score);
        } else {
            std::vector<GaussianSample> samples;
            samples.reserve(out.population.size());
            for (const PopulationMember& m : out.population) {
                samples.push_back({std::get<double>(m.draws[h]), m.fitness});
            }
            out.gradient[h] = {gaussian_gradient(std::get<GaussianTheta>(thetas[h]), samples)};
        }
    }
    optimizer.step(thetas, out.gradient);
    return out;
}

TrainResult train(const Sketch& sketch, const SpecSet& spec, const TrainConfig& config,
                  std::optional<Thetas> initial) {
    config.validate();
    if (spec.arity != sketch.arity()) {
        throw Error(ErrorCategory::Spec, "spec has " + std::to_string(spec.arity) +
                                             " input column(s) but the sketch takes " +
                                             std::to_string(sketch.arity()));
    }
    Thetas thetas = initial ? std::move(*initial)
                            : initial_thetas(sketch, config.sigma, config.mu_init);
    check_thetas(sketch, thetas);

    ThetaOptimizer optimizer(config);
    std::vector<TrainRecord> records;
    records.reserve(config.iterations);

    Thetas best_thetas = thetas;
    double best_loss = std::numeric_limits<double>::infinity();
    double argmax_loss = best_loss;

    for (std::size_t it = 1; it <= config.iterations; ++it) {
        const StepOutcome step = train_step(sketch, spec, thetas, config, it, optimizer);
        argmax_loss = eval_spec_loss(argmax_program(sketch, thetas), spec, config.penalty);
        if (argmax_loss < best_loss) {
            best_loss = argmax_loss;
            best_thetas = thetas;
        }
        records.push_back({it, step.mean_population_loss, argmax_loss, best_loss});
    }

    ConcreteProgram final_program = argmax_program(sketch, thetas);
    ConcreteProgram best_program = argmax_program(sketch, best_thetas);
    return TrainResult{std::move(thetas),         std::move(best_thetas), std::move(final_program),
                       argmax_loss,               std::move(best_program), best_loss,
                       std::move(records)};
}

// ---------------------------------------------------------------------------

std::vector<RankedAssignment> enumerate_discrete(const Sketch& sketch,
                                                 std::span<const double> real_values,
                                                 const SpecSet& spec, std::size_t cap,
                                                 double penalty) {
    std::vector<std::size_t> categorical;
    std::size_t real_count = 0;
    std::size_t space = 1;
    for (const HoleSpec& hole : sketch.holes) {
        if (hole.categorical()) {
            categorical.push_back(hole.index);
            if (space > cap / hole.arity()) {
                throw Error(ErrorCategory::Runtime,
                            "discrete search space exceeds the enumeration cap of " +
                                std::to_string(cap));
            }
            space *= hole.arity();
        } else {
            ++real_count;
        }
    }
    if (space > cap) {
        throw Error(ErrorCategory::Runtime,
                    "discrete search space exceeds the enumeration cap of " + std::to_string(cap));
    }
    if (real_values.size() != real_count) {
        throw Error(ErrorCategory::Runtime,
                    "sketch has " + std::to_string(real_count) + " Real hole(s) but " +
                        std::to_string(real_values.size()) + " value(s) were given");
    }

    Assignment current;
    current.values.resize(sketch.hole_count());
    std::size_t next_real = 0;
    for (const HoleSpec& hole : sketch.holes) {
        if (hole.categorical()) {
            current.values[hole.index] = std::size_t{0};
        } else {
            current.values[hole.index] = real_values[next_real++];
        }
    }

    std::vector<RankedAssignment> ranked;
    ranked.reserve(space);
    for (std::size_t n = 0; n < space; ++n) {
        ranked.push_back({current, eval_spec_loss(instantiate(sketch, current), spec, penalty)});
        // Odometer increment with the last categorical hole varying fastest.
        for (auto pos = categorical.rbegin(); pos != categorical.rend(); ++pos) {
            auto& digit = std::get<std::size_t>(current.values[*pos]);
            if (++digit < sketch.holes[*pos].arity()) {
                break;
            }
            digit = 0;
        }
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const RankedAssignment& a, const RankedAssignment& b) {
                         return a.loss < b.loss;
                     });
    return ranked;
}

} // namespace nesynth
