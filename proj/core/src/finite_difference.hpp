#pragma once

#include <type_traits>

#include "solitonlab/geometry.hpp"

namespace solitonlab::detail {

// Central difference of f along coordinate `dir`, with one Richardson level
// (4 D(h/2) − D(h)) / 3 when enabled. f may return double, Eigen types or
// Tensor3; anything closed under +, − and scalar multiplication.
template <class F>
auto partial(F&& f, const Point& p, int dir, const NumericsConfig& cfg) {
  using R = std::decay_t<decltype(f(p))>;
  auto central = [&](double h) -> R {
    Point fwd = p;
    Point bwd = p;
    fwd[dir] += h;
    bwd[dir] -= h;
    R a = f(fwd);
    R b = f(bwd);
    R d = (a - b) * (1.0 / (2.0 * h));
    return d;
  };
  if (!cfg.richardson) return central(cfg.h);
  R coarse = central(cfg.h);
  R fine = central(0.5 * cfg.h);
  R out = (fine * 4.0 - coarse) * (1.0 / 3.0);
  return out;
}

}  // namespace solitonlab::detail
