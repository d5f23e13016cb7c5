#include "horncode/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include <omp.h>

#include "horncode/error.hpp"

namespace horncode {

namespace {

inline double squared_distance(const double* p, const double* q, std::size_t dim) {
  double s = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    double d = p[k] - q[k];
    s += d * d;
  }
  return s;
}

inline bool better(double d, std::size_t i, std::size_t j, const PairMin& cur) {
  if (d != cur.distance) return d < cur.distance;
  return i < cur.i || (i == cur.i && j < cur.j);
}

}  // namespace

PairMin min_pair_distance(std::span<const double> a, std::span<const double> b, std::size_t dim) {
  const auto na = static_cast<std::ptrdiff_t>(a.size() / dim);
  const std::size_t nb = b.size() / dim;
  PairMin best{std::numeric_limits<double>::infinity(), 0, 0};
#pragma omp parallel
  {
    PairMin local{std::numeric_limits<double>::infinity(), 0, 0};
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < na; ++i) {
      const double* p = a.data() + static_cast<std::size_t>(i) * dim;
      for (std::size_t j = 0; j < nb; ++j) {
        double d = squared_distance(p, b.data() + j * dim, dim);
        if (better(d, static_cast<std::size_t>(i), j, local)) local = {d, static_cast<std::size_t>(i), j};
      }
    }
#pragma omp critical
    if (better(local.distance, local.i, local.j, best)) best = local;
  }
  best.distance = std::sqrt(best.distance);
  return best;
}

namespace serial {

PairMin min_pair_distance(std::span<const double> a, std::span<const double> b, std::size_t dim) {
  const std::size_t na = a.size() / dim;
  const std::size_t nb = b.size() / dim;
  PairMin best{std::numeric_limits<double>::infinity(), 0, 0};
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      double d = squared_distance(a.data() + i * dim, b.data() + j * dim, dim);
      if (better(d, i, j, best)) best = {d, i, j};
    }
  }
  best.distance = std::sqrt(best.distance);
  return best;
}

}  // namespace serial

void apply_thread_cap_from_env() {
  const char* env = std::getenv("HORNCODE_THREADS");
  if (env == nullptr || *env == '\0') return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1 || n > 4096) {
    throw Error(ErrorKind::BadParams, std::string("HORNCODE_THREADS must be a positive integer, got '") + env + "'");
  }
  omp_set_num_threads(static_cast<int>(n));
}

}  // namespace horncode
