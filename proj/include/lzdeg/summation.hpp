#pragma once

#include <cstddef>
#include <span>

namespace lzdeg {

/// Tree summation; the order depends only on the length of the input.
template <class T>
T pairwise_sum(std::span<const T> v) {
  if (v.empty()) return T{};
  if (v.size() <= 8) {
    T s = v[0];
    for (std::size_t i = 1; i < v.size(); ++i) s += v[i];
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

/// Kahan-compensated running sum.
template <class T>
class CompensatedSum {
 public:
  void add(const T& x) {
    const T y = x - c_;
    const T t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  const T& value() const { return s_; }

 private:
  T s_{};
  T c_{};
};

}  // namespace lzdeg
