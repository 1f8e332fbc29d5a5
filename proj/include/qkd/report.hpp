// report.hpp
// The record every key-rate computation returns.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qkd/stats.hpp"

namespace qkd {

struct KeyRateReport {
    std::string protocol;
    PsiMode psi = PsiMode::Four;
    double alpha_key = 0.0;

    double rate = 0.0;           // entropy_bound - cond_shannon, possibly negative
    double entropy_bound = 0.0;  // adversary-side conditional entropy lower bound
    double cond_shannon = 0.0;   // classical conditional entropy between the parties

    // Free parameters at the adversary's optimum, plus any protocol parameters
    // worth echoing; insertion order is the serialization order.
    std::vector<std::pair<std::string, double>> minimizer;

    double distillable() const { return std::max(0.0, rate); }
};

}  // namespace qkd
