#pragma once

#include "nesynth/sketch.hpp"
#include "nesynth/spec_set.hpp"

#include <span>

namespace nesynth {

/// Loss assigned to a candidate that produces a non-finite prediction anywhere.
inline constexpr double kDefaultPenalty = 1e12;

/// IEEE evaluation: comparisons are exact, chains fold left to right, and
/// division by zero propagates inf/NaN instead of trapping.
/// Throws Error(Runtime) on arity mismatch.
double eval_program(const ConcreteProgram& program, std::span<const double> input);

/// Mean squared error over the spec, or `penalty` if any prediction is non-finite.
/// Throws Error(Runtime) on an empty spec or arity mismatch.
double eval_spec_loss(const ConcreteProgram& program, const SpecSet& spec,
                      double penalty = kDefaultPenalty);

} // namespace nesynth
