#pragma once

#include <random>

namespace fieldnav {

/// The one RNG type used across the stack. Every stochastic operation takes it by reference so a
/// single seed reproduces a whole mission.
using Rng = std::mt19937_64;

}  // namespace fieldnav
