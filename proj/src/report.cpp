#include "omf/report.hpp"

#include <cstdlib>
#include <string>

#include "omf/errors.hpp"
#include "omf/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace omf {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

std::uint64_t default_seed() {
  const char* env = std::getenv("OMF_SEED");
  if (env == nullptr || *env == '\0') return 42;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used);
    if (used != std::string(env).size()) throw Error("");
    return v;
  } catch (...) {
    throw Error(std::string("OMF_SEED is not an unsigned integer: ") + env);
  }
}

int parallel_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace omf
