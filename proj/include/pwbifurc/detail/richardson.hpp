#pragma once

#include <stdexcept>

namespace pwbifurc {

namespace detail {

template <class F>
double central_difference(F& fn, double x, double h, int order) {
  switch (order) {
    case 1: return (fn(x + h) - fn(x - h)) / (2.0 * h);
    case 2: return (fn(x + h) - 2.0 * fn(x) + fn(x - h)) / (h * h);
    case 3: return (fn(x + 2.0 * h) - 2.0 * fn(x + h) + 2.0 * fn(x - h) - fn(x - 2.0 * h)) / (2.0 * h * h * h);
    default: throw std::invalid_argument("difference order must be 1, 2 or 3");
  }
}

}  // namespace detail

template <class F>
double richardson_derivative(F&& fn, double x, double h, int order) {
  // All three stencils have O(h^2) leading error.
  const double coarse = detail::central_difference(fn, x, h, order);
  const double fine = detail::central_difference(fn, x, 0.5 * h, order);
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace pwbifurc
