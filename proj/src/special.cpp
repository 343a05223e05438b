#include "entropyts/special.hpp"

#include <cmath>
#include <limits>

#include "entropyts/error.hpp"

namespace entropyts {

namespace {
constexpr double kShift = 10.0;
}

double digamma(double x)
{
    if (!(x > 0.0)) throw DomainError("digamma: argument must be positive");
    double acc = 0.0;
    while (x < kShift) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double r = 1.0 / (x * x);
    // Bernoulli-number tail of the asymptotic series.
    double tail = r * (1.0 / 12.0
                - r * (1.0 / 120.0
                - r * (1.0 / 252.0
                - r * (1.0 / 240.0
                - r * (1.0 / 132.0
                - r * (691.0 / 32760.0
                - r * (1.0 / 12.0)))))));
    return acc + std::log(x) - 0.5 / x - tail;
}

double trigamma(double x)
{
    if (!(x > 0.0)) throw DomainError("trigamma: argument must be positive");
    double acc = 0.0;
    while (x < kShift) {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    const double ix = 1.0 / x;
    const double r = ix * ix;
    double tail = ix * r * (1.0 / 6.0
                - r * (1.0 / 30.0
                - r * (1.0 / 42.0
                - r * (1.0 / 30.0
                - r * (5.0 / 66.0
                - r * (691.0 / 2730.0
                - r * (7.0 / 6.0)))))));
    return acc + ix + 0.5 * r + tail;
}

}  // namespace entropyts
