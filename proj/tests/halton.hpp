#pragma once

#include <cstddef>

// Radical inverse of i in the given prime base.
inline double halton(std::size_t i, unsigned base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}
