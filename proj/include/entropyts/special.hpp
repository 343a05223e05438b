#pragma once

namespace entropyts {

/// Digamma function for x > 0.
double digamma(double x);

/// Trigamma function for x > 0.
double trigamma(double x);

}  // namespace entropyts
