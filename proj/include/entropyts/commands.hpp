#pragma once

#include <iosfwd>
#include <string>

#include "entropyts/core_entropy.hpp"
#include "entropyts/draws.hpp"
#include "entropyts/io.hpp"

namespace entropyts {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,  ///< a computation raised an error
    kExitInput = 2,    ///< missing or unparseable input
    kExitUsage = 64,
};

/// Parses argv and runs one subcommand: entropy, mi, te, draws, apen, hmm,
/// simulate, regress. Tables go to --out or to `out`; diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// draw: draw-membership symbols at q1; return: return quantiles (q1, 1-q1);
/// raw: values taken as integer symbols.
SymbolSeries symbolize(const TimeSeries& s, const std::string& method, double q1,
                       QuantileScope scope = QuantileScope::Pooled);

}  // namespace entropyts
