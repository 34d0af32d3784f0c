#pragma once

#include "nesynth/interpreter.hpp"
#include "nesynth/search_dist.hpp"
#include "nesynth/sketch.hpp"
#include "nesynth/spec_set.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace nesynth {

enum class OptimizerKind { Sgd, Adam };

struct TrainConfig {
    double learning_rate = 0.1;
    std::size_t iterations = 10000;
    std::size_t population = 50;
    double sigma = 0.5;
    double mu_init = 1.0; // multiplicative identity
    std::uint64_t seed = 0;
    OptimizerKind optimizer = OptimizerKind::Sgd;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    CategoricalScore categorical_score = CategoricalScore::SoftmaxGrad;
    double penalty = kDefaultPenalty;
    std::size_t log_every = 10;
    /// Worker threads for candidate evaluation; 0 uses every core, 1 runs inline.
    std::size_t threads = 0;

    /// Throws Error(Config) naming the first violated constraint.
    void validate() const;
};

struct TrainRecord {
    std::size_t iteration = 0;
    double mean_population_loss = 0.0;
    double argmax_loss = 0.0;
    double best_so_far_loss = 0.0;
};

/// Raw draw for one hole: a category index, or the standard-normal eps
/// behind a Real value (value = mu + sigma * eps).
using HoleDraw = std::variant<std::size_t, double>;

struct PopulationMember {
    Assignment assignment;
    std::vector<HoleDraw> draws;
    double loss = 0.0;
    double fitness = 0.0;
};

/// Draws `size` candidates for `iteration`. Every (iteration, candidate, hole)
/// triple has its own random substream derived from `seed`.
std::vector<PopulationMember> sample_population(const Thetas& thetas, std::size_t size,
                                                std::uint64_t seed, std::uint64_t iteration);

/// Highest-logit token (lowest index on ties) for categorical holes, mu for Real holes.
Assignment argmax_assignment(const Thetas& thetas);
ConcreteProgram argmax_program(const Sketch& sketch, const Thetas& thetas);

/// Optimizer over the learnable parameters (all logits and every mu).
/// Steps are ascent: theta += lr * direction.
class ThetaOptimizer {
public:
    explicit ThetaOptimizer(const TrainConfig& config);

    /// `gradient` holds one entry per logit for categorical holes and one
    /// entry (d/d mu) for Gaussian holes, in hole order.
    void step(Thetas& thetas, std::span<const std::vector<double>> gradient);

private:
    OptimizerKind kind_;
    double learning_rate_;
    double beta1_;
    double beta2_;
    double eps_;
    std::uint64_t steps_ = 0;
    std::vector<std::vector<double>> first_moment_;
    std::vector<std::vector<double>> second_moment_;
};

struct StepOutcome {
    double mean_population_loss = 0.0;
    std::vector<PopulationMember> population;
    std::vector<std::vector<double>> gradient;
};

/// One NES iteration: sample, instantiate, score, standardize, estimate
/// per-hole gradients and step `thetas` in place.
StepOutcome train_step(const Sketch& sketch, const SpecSet& spec, Thetas& thetas,
                       const TrainConfig& config, std::uint64_t iteration,
                       ThetaOptimizer& optimizer);

struct TrainResult {
    Thetas final_thetas;
    Thetas best_thetas;
    ConcreteProgram final_program;
    double final_loss;
    ConcreteProgram best_program;
    double best_loss;
    std::vector<TrainRecord> records;
};

/// Runs config.iterations steps from `initial` (or from initial_thetas()).
/// The argmax program is scored after every step; the best one is kept.
TrainResult train(const Sketch& sketch, const SpecSet& spec, const TrainConfig& config,
                  std::optional<Thetas> initial = std::nullopt);

struct RankedAssignment {
    Assignment assignment;
    double loss = 0.0;
};

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

/// Scores every combination of categorical tokens with Real holes pinned to
/// `real_values` (in Real-hole order). Sorted by loss; ties keep
/// lexicographic assignment order. Throws Error(Runtime) if the space
/// exceeds `cap` or the real count does not match.
std::vector<RankedAssignment> enumerate_discrete(const Sketch& sketch,
                                                 std::span<const double> real_values,
                                                 const SpecSet& spec,
                                                 std::size_t cap = kDefaultEnumerationCap,
                                                 double penalty = kDefaultPenalty);

} // namespace nesynth
