#pragma once

#include "nesynth/sketch.hpp"

#include <cstddef>
#include <random>
#include <span>
#include <variant>
#include <vector>

namespace nesynth {

struct CategoricalTheta {
    std::vector<double> logits;
    friend bool operator==(const CategoricalTheta&, const CategoricalTheta&) = default;
};

/// `sigma` is a fixed exploration width; only `mu` is learned.
struct GaussianTheta {
    double mu = 0.0;
    double sigma = 0.5;
    friend bool operator==(const GaussianTheta&, const GaussianTheta&) = default;
};

using HoleTheta = std::variant<CategoricalTheta, GaussianTheta>;

/// One search distribution per hole, in hole-table order.
using Thetas = std::vector<HoleTheta>;

/// Per-sample weight used by the categorical accumulator.
enum class CategoricalScore {
    SoftmaxGrad,    // d pi(e)/d theta_j: P(1-P) on the drawn token, -P p_j elsewhere
    LogSoftmaxGrad, // d log pi(e)/d theta_j: (1-p_j) on the drawn token, -p_j elsewhere
};

/// Uniform logits for categorical holes, N(mu_init, sigma) for Real holes.
Thetas initial_thetas(const Sketch& sketch, double sigma, double mu_init);

/// Throws Error(Parse) naming the hole if `thetas` does not fit the hole table.
void check_thetas(const Sketch& sketch, const Thetas& thetas);

std::vector<double> softmax(std::span<const double> logits);

/// Inverse-CDF draw from a probability vector.
template <class Rng>
std::size_t sample_index(std::span<const double> probabilities, Rng& rng) {
    const double u = std::generate_canonical<double, 64>(rng);
    double cumulative = 0.0;
    for (std::size_t i = 0; i + 1 < probabilities.size(); ++i) {
        cumulative += probabilities[i];
        if (u < cumulative) {
            return i;
        }
    }
    return probabilities.size() - 1;
}

template <class Rng>
std::size_t sample_categorical(const CategoricalTheta& theta, Rng& rng) {
    const std::vector<double> p = softmax(theta.logits);
    return sample_index(p, rng);
}

/// Standard-normal perturbation; the candidate value is mu + sigma * eps.
template <class Rng>
double sample_standard_normal(Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    return normal(rng);
}

struct CategoricalSample {
    std::size_t index = 0;
    double fitness = 0.0;
};

struct GaussianSample {
    double eps = 0.0;
    double fitness = 0.0;
};

/// Categorical NES accumulator: T_j = (1/n) sum_i L_ij with the weights
/// selected by `score`. Throws Error(Runtime) on an empty sample list.
std::vector<double> categorical_gradient(const CategoricalTheta& theta,
                                         std::span<const CategoricalSample> samples,
                                         CategoricalScore score = CategoricalScore::SoftmaxGrad);

/// Closed-form Gaussian search gradient w.r.t. mu: sum_i F_i eps_i / (n sigma).
double gaussian_gradient(const GaussianTheta& theta, std::span<const GaussianSample> samples);

inline constexpr double kStandardizeEpsilon = 1e-8;

/// Z-scores negated losses (population std), so lower loss means higher fitness.
/// Throws Error(Runtime) for fewer than two entries.
std::vector<double> standardize_fitness(std::span<const double> losses);

} // namespace nesynth
