#ifndef HYDROLAT_GRID_HPP
#define HYDROLAT_GRID_HPP

#include <cstdint>
#include <numeric>

#include "hydrolat/common.hpp"

namespace hydrolat {

// Periodic box {0..L_1-1} x ... x {0..L_d-1}, row-major site indexing.
// Site k on axis i carries the signed coordinate k (k < L/2) or k - L,
// and the dual angle theta_i = 2*pi*k/L_i folded into [-pi, pi).
struct Box {
  std::vector<int> extents;

  Box() = default;
  explicit Box(std::vector<int> ext) : extents(std::move(ext)) {}
  static Box cubic(int d, int L) { return Box(std::vector<int>(d, L)); }

  int dim() const { return static_cast<int>(extents.size()); }
  std::int64_t size() const {
    std::int64_t s = 1;
    for (int L : extents) s *= L;
    return s;
  }

  std::int64_t index(const std::vector<int>& k) const {
    std::int64_t idx = 0;
    for (int i = 0; i < dim(); ++i) {
      int ki = k[i] % extents[i];
      if (ki < 0) ki += extents[i];
      idx = idx * extents[i] + ki;
    }
    return idx;
  }

  std::vector<int> unindex(std::int64_t idx) const {
    std::vector<int> k(dim());
    for (int i = dim() - 1; i >= 0; --i) {
      k[i] = static_cast<int>(idx % extents[i]);
      idx /= extents[i];
    }
    return k;
  }

  // signed coordinate of a site, each component in [-L/2, L/2)
  std::vector<int> signed_coord(std::int64_t idx) const {
    std::vector<int> k = unindex(idx);
    for (int i = 0; i < dim(); ++i)
      if (k[i] >= extents[i] / 2 + extents[i] % 2) k[i] -= extents[i];
    return k;
  }

  RVec theta(std::int64_t idx) const {
    std::vector<int> k = signed_coord(idx);
    RVec th(dim());
    for (int i = 0; i < dim(); ++i) th[i] = 2.0 * pi * k[i] / extents[i];
    return th;
  }

  bool power_of_two() const {
    for (int L : extents)
      if (L <= 0 || (L & (L - 1)) != 0) return false;
    return true;
  }
};

inline int next_pow2(double x) {
  int L = 2;
  while (L < x) L *= 2;
  return L;
}

// Uniform angle grid on the torus [-pi,pi)^d with M points per axis;
// the uniform (trapezoid) rule on it is spectrally accurate for smooth
// periodic integrands: (2pi)^{-d} \int f dtheta  ~=  mean over the grid.
struct ThetaGrid {
  int d = 1;
  int m = 64;

  std::int64_t size() const {
    std::int64_t s = 1;
    for (int i = 0; i < d; ++i) s *= m;
    return s;
  }
  RVec point(std::int64_t idx) const {
    RVec th(d);
    for (int i = d - 1; i >= 0; --i) {
      int k = static_cast<int>(idx % m);
      idx /= m;
      th[i] = -pi + 2.0 * pi * k / m;
    }
    return th;
  }
};

}  // namespace hydrolat

#endif
