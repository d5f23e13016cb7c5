#pragma once

#include <cstdint>
#include <random>

#include "horncode/code_model.hpp"

namespace horncode {

using Rng = std::mt19937_64;
inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

// Random valid code over a deliberately small alphabet so that equivalent
// pairs occur with useful frequency.
InnerLipschitzCode random_code(Rng& rng, int max_components = 4, int max_labels = 3);

// Same code with components permuted and labels renamed at random.
InnerLipschitzCode shuffle_code(const InnerLipschitzCode& code, Rng& rng);

}  // namespace horncode
