#pragma once

#include <cstddef>
#include <span>

namespace horncode {

struct PairMin {
  double distance = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
};

// Closest pair between two point sets stored row-major with `dim` coordinates
// per point. Ties resolve to the smallest (i, j), so both versions agree exactly.
PairMin min_pair_distance(std::span<const double> a, std::span<const double> b, std::size_t dim);

namespace serial {
PairMin min_pair_distance(std::span<const double> a, std::span<const double> b, std::size_t dim);
}  // namespace serial

// Applies HORNCODE_THREADS (if set) as the OpenMP thread cap; BadParams if malformed.
void apply_thread_cap_from_env();

}  // namespace horncode
