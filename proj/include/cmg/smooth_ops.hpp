#pragma once

// Smooth, temperature-parameterized replacements for comparison, sign, clip,
// max, argmin and top-K selection. Each converges pointwise to its hard
// counterpart as tau -> 0 and is safe for |x / tau| up to ~1e6 (all forms are
// written overflow-safe). Hard variants used by the no-smoothing solver mode
// live at the bottom.

#include <algorithm>
#include <array>
#include <cassert>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "cmg/dual.hpp"

namespace cmg {

// sigmoid(x), stable for large |x|. The two branches evaluate algebraically
// identical expressions, so the branch is value- and derivative-exact.
template <class T>
T stable_sigmoid(T x) {
  using std::exp;
  bool nonneg;
  {
    HardBranchScope scope;
    nonneg = !(primal(x) < 0.0);
  }
  if (nonneg) {
    return T(1) / (T(1) + exp(-x));
  }
  const T e = exp(x);
  return e / (T(1) + e);
}

// Soft comparison [x > a]: sigma((x - a) / tau), 0.5 exactly at x = a.
template <class T>
T sigma_greater(const T& x, double a, double tau) {
  assert(tau > 0.0);
  return stable_sigmoid((x - T(a)) / T(tau));
}

template <class T>
T sigma_smaller(const T& x, double b, double tau) {
  assert(tau > 0.0);
  return stable_sigmoid((T(b) - x) / T(tau));
}

// Soft interval indicator [lo <= x <= hi] as a product of two sigmoids.
template <class T>
T within_s(const T& x, double lo, double hi, double tau) {
  return sigma_greater(x, lo, tau) * sigma_smaller(x, hi, tau);
}

// Soft sign: tanh(x / tau).
template <class T>
T sign_s(const T& x, double tau) {
  assert(tau > 0.0);
  using std::tanh;
  return tanh(x / T(tau));
}

// tau * log(1 + exp(x / tau)). For x >> 0 computed as x + tau*log1p(exp(-x/tau));
// both forms are the same function, so the branch is exact.
template <class T>
T softplus_s(const T& x, double tau) {
  assert(tau > 0.0);
  using std::exp;
  using std::log1p;
  const T scaled = x / T(tau);
  bool positive;
  {
    HardBranchScope scope;
    positive = primal(scaled) > 0.0;
  }
  if (positive) {
    return x + T(tau) * log1p(exp(-scaled));
  }
  return T(tau) * log1p(exp(scaled));
}

// Softened clip to [lo, hi]; strictly monotone, fixes the midpoint of a
// symmetric interval exactly (softplus antisymmetry).
template <class T>
T clip_s(const T& x, double lo, double hi, double tau) {
  assert(lo < hi);
  return T(lo) + softplus_s(x - T(lo), tau) - softplus_s(x - T(hi), tau);
}

// tau * log(sum exp(x_i / tau)), max-shifted. Bounds: max(x) <= result
// <= max(x) + tau*log(n). The shift element is carried as a full scalar, so
// tangents are exact.
template <class T>
T lse_max(const T* xs, size_t n, double tau) {
  assert(n >= 1 && tau > 0.0);
  using std::exp;
  using std::log;
  size_t max_i = 0;
  {
    HardBranchScope scope;
    for (size_t i = 1; i < n; ++i)
      if (primal(xs[i]) > primal(xs[max_i])) max_i = i;
  }
  const T m = xs[max_i];
  T acc = T(0);
  for (size_t i = 0; i < n; ++i) acc += exp((xs[i] - m) / T(tau));
  return m + T(tau) * log(acc);
}

template <class T>
T lse_max(const std::vector<T>& xs, double tau) {
  return lse_max(xs.data(), xs.size(), tau);
}

// Smooth minimum built from lse_max: -LSE(-x).
template <class T>
T lse_min(const T* xs, size_t n, double tau) {
  std::vector<T> neg(n);
  for (size_t i = 0; i < n; ++i) neg[i] = -xs[i];
  return -lse_max(neg.data(), n, tau);
}

// softmax(-x / tau): probability mass on the smallest entries. Invariant under
// adding a constant to all entries.
template <class T>
void argmin_s(const T* xs, size_t n, double tau, T* out) {
  assert(n >= 1 && tau > 0.0);
  using std::exp;
  size_t min_i = 0;
  {
    HardBranchScope scope;
    for (size_t i = 1; i < n; ++i)
      if (primal(xs[i]) < primal(xs[min_i])) min_i = i;
  }
  const T m = xs[min_i];
  T total = T(0);
  for (size_t i = 0; i < n; ++i) {
    out[i] = exp((m - xs[i]) / T(tau));
    total += out[i];
  }
  const T inv = T(1) / total;
  for (size_t i = 0; i < n; ++i) out[i] = out[i] * inv;
}

template <class T>
std::vector<T> argmin_s(const std::vector<T>& xs, double tau) {
  std::vector<T> out(xs.size());
  argmin_s(xs.data(), xs.size(), tau, out.data());
  return out;
}

template <class T, size_t N>
std::array<T, N> argmin_s(const std::array<T, N>& xs, double tau) {
  std::array<T, N> out;
  argmin_s(xs.data(), N, tau, out.data());
  return out;
}

// Row-stochastic soft selection matrix: row k concentrates on the index of the
// k-th largest entry. Row k = softmax(-|sorted_desc(x)_k - x| / tau). The sort
// itself is hard (on primal values) and enters derivatives only through the
// row softmax distances, which are smooth away from ties.
template <class T>
struct SoftSelect {
  size_t selected = 0;   // K
  size_t candidates = 0; // D
  std::vector<T> w;      // K x D, row-major; every row sums to 1

  const T& operator()(size_t k, size_t i) const { return w[k * candidates + i]; }
};

template <class T>
SoftSelect<T> soft_topk(const std::vector<T>& xs, size_t k, double tau) {
  const size_t d = xs.size();
  if (k < 1 || k > d) throw std::invalid_argument("soft_topk: require 1 <= K <= D");
  assert(tau > 0.0);
  using std::exp;

  std::vector<T> sorted = xs;
  {
    HardBranchScope scope;
    std::sort(sorted.begin(), sorted.end(),
              [](const T& a, const T& b) { return primal(a) > primal(b); });
  }

  SoftSelect<T> sel;
  sel.selected = k;
  sel.candidates = d;
  sel.w.resize(k * d);
  std::vector<T> row(d);
  for (size_t r = 0; r < k; ++r) {
    using std::fabs;
    for (size_t i = 0; i < d; ++i) row[i] = fabs(sorted[r] - xs[i]);
    argmin_s(row.data(), d, tau, sel.w.data() + r * d);
  }
  return sel;
}

// --- hard counterparts (no-smoothing solver mode; double only) ---------------

inline double clip_hard(double x, double lo, double hi) { return std::clamp(x, lo, hi); }

inline double within_hard(double x, double lo, double hi) {
  return (x >= lo && x <= hi) ? 1.0 : 0.0;
}

inline double sign_hard(double x) { return x < 0.0 ? -1.0 : (x > 0.0 ? 1.0 : 0.0); }

template <size_t N>
std::array<double, N> argmin_hard(const std::array<double, N>& xs) {
  std::array<double, N> out{};
  size_t best = 0;
  for (size_t i = 1; i < N; ++i)
    if (xs[i] < xs[best]) best = i;
  out[best] = 1.0;
  return out;
}

}  // namespace cmg
