#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ezbsde/constraint_set.hpp"
#include "ezbsde/market_model.hpp"
#include "ezbsde/preferences.hpp"

namespace ezbsde {

// One experiment = model + preferences + constraints + discretization.
// INI-style file, sections [model] [preferences] [constraints] [grid] [mc]
// [run]; '#' or ';' start a comment.  Unknown sections or keys are errors
// (typos should not silently fall back to defaults).
struct ExperimentConfig {
    MarketModel model;
    Preferences prefs;
    ConstraintSet lambda;                 // portfolio constraint, pi-space
    std::optional<ConstraintSet> chat_set;  // consumption constraint, optional

    double T = 0.0;  // horizon; defaults per model kind
    int N = 100;     // time steps
    int M = 100000;  // Monte-Carlo paths
    std::uint64_t seed = 42;
    int degree = 3;      // regression basis degree
    double kz = 0.0;     // Z truncation override; 0 = automatic
    double omega = 1.0;  // initial wealth
    std::string out_dir = "out";
};

// Parse errors carry "<file>:<line>: ..." so a broken config is
// pinpointable.  Missing [model]/[preferences] keys fall back to the built-in
// parameter set of the chosen kind.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig load_config_text(const std::string& text,
                                  const std::string& name);

// "interval lo hi" | "union [lo hi] [lo hi] ..." | "finite p1 p2 ..." |
// "full"; brackets are cosmetic.  Used for both pi and chat constraints.
ConstraintSet parse_constraint(const std::string& text);

}  // namespace ezbsde
