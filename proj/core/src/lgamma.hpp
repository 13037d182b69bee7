#pragma once

#include <cmath>

namespace genum::detail {

// std::lgamma writes the global `signgam`; the reentrant variant keeps cost
// evaluation safe to call from several threads.
inline double lgamma_safe(double x) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

}  // namespace genum::detail
