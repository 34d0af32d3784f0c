#include "nesynth/search_dist.hpp"

#include "nesynth/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nesynth {

Thetas initial_thetas(const Sketch& sketch, double sigma, double mu_init) {
    Thetas thetas;
    thetas.reserve(sketch.hole_count());
    for (const HoleSpec& hole : sketch.holes) {
        if (hole.categorical()) {
            thetas.emplace_back(CategoricalTheta{std::vector<double>(hole.arity(), 0.0)});
        } else {
            thetas.emplace_back(GaussianTheta{mu_init, sigma});
        }
    }
    return thetas;
}

void check_thetas(const Sketch& sketch, const Thetas& thetas) {
    if (thetas.size() != sketch.hole_count()) {
        throw Error(ErrorCategory::Parse, "theta document has " + std::to_string(thetas.size()) +
                                              " entries but the sketch has " +
                                              std::to_string(sketch.hole_count()) + " holes");
    }
    for (const HoleSpec& hole : sketch.holes) {
        const std::string where =
            "hole " + std::to_string(hole.index) + " " + std::string(hole_token(hole.kind));
        const HoleTheta& theta = thetas[hole.index];
        if (hole.categorical()) {
            const auto* cat = std::get_if<CategoricalTheta>(&theta);
            if (cat == nullptr) {
                throw Error(ErrorCategory::Parse, where + " expects logits, found a Gaussian");
            }
            if (cat->logits.size() != hole.arity()) {
                throw Error(ErrorCategory::Parse,
                            where + " expects " + std::to_string(hole.arity()) + " logits, found " +
                                std::to_string(cat->logits.size()));
            }
        } else {
            const auto* gauss = std::get_if<GaussianTheta>(&theta);
            if (gauss == nullptr) {
                throw Error(ErrorCategory::Parse, where + " expects mu/sigma, found logits");
            }
            if (!(gauss->sigma > 0.0)) {
                throw Error(ErrorCategory::Parse, where + ": sigma must be positive");
            }
        }
    }
}

std::vector<double> softmax(std::span<const double> logits) {
    std::vector<double> p(logits.size());
    if (logits.empty()) {
        return p;
    }
    const double top = *std::max_element(logits.begin(), logits.end());
    double total = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        p[i] = std::exp(logits[i] - top);
        total += p[i];
    }
    for (double& v : p) {
        v /= total;
    }
    return p;
}

std::vector<double> categorical_gradient(const CategoricalTheta& theta,
                                         std::span<const CategoricalSample> samples,
                                         CategoricalScore score) {
    if (samples.empty()) {
        throw Error(ErrorCategory::Runtime, "categorical gradient needs at least one sample");
    }
    const std::vector<double> p = softmax(theta.logits);
    const double inv_n = 1.0 / static_cast<double>(samples.size());
    std::vector<double> grad(p.size(), 0.0);

    for (const CategoricalSample& s : samples) {
        const double drawn = p.at(s.index);
        for (std::size_t j = 0; j < p.size(); ++j) {
            double term = 0.0;
            if (score == CategoricalScore::SoftmaxGrad) {
                term = (s.index == j) ? drawn * (1.0 - drawn) * s.fitness
                                      : -drawn * p[j] * s.fitness;
            } else {
                term = (s.index == j) ? (1.0 - p[j]) * s.fitness : -p[j] * s.fitness;
            }
            grad[j] += inv_n * term;
        }
    }
    return grad;
}

double gaussian_gradient(const GaussianTheta& theta, std::span<const GaussianSample> samples) {
    if (samples.empty()) {
        throw Error(ErrorCategory::Runtime, "Gaussian gradient needs at least one sample");
    }
    double sum = 0.0;
    for (const GaussianSample& s : samples) {
        sum += s.fitness * s.eps;
    }
    return sum / (static_cast<double>(samples.size()) * theta.sigma);
}

std::vector<double> standardize_fitness(std::span<const double> losses) {
    const std::size_t n = losses.size();
    if (n < 2) {
        throw Error(ErrorCategory::Runtime, "fitness standardization needs at least two losses");
    }
    // Centre on the first entry so a constant population yields exact zeros.
    const double anchor = -losses[0];
    std::vector<double> centred(n);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        centred[i] = -losses[i] - anchor;
        mean += centred[i];
    }
    mean /= static_cast<double>(n);

    double variance = 0.0;
    for (double& v : centred) {
        v -= mean;
        variance += v * v;
    }
    variance /= static_cast<double>(n);

    const double scale = std::sqrt(variance) + kStandardizeEpsilon;
    for (double& v : centred) {
        v /= scale;
    }
    return centred;
}

} // namespace nesynth
