#pragma once

// Forward-mode derivative-carrying scalar. Every kernel in this library is
// templated over its scalar type, so running a query with Dual<12> seeded at
// the two 6D pose vectors yields the full pose Jacobian of every output in a
// single pass. Nesting (Dual<3, Dual<12>>) gives spatial gradients whose
// entries still carry pose tangents.

#include <array>
#include <cassert>
#include <cmath>
#include <cstdlib>
#include <type_traits>
#include <utility>
#include <vector>

namespace cmg {

namespace detail {
inline thread_local int hard_branch_scope_depth = 0;

inline void note_hard_branch() {
#ifdef CMG_CHECK_BRANCHES
  if (hard_branch_scope_depth <= 0) {
    // A data-dependent branch leaked into a differentiated path. Smooth code
    // must route decisions through smooth_ops or wrap documented value-exact
    // branches (overflow-safe forms, lse max shift) in HardBranchScope.
    assert(false && "hard branch on a derivative-carrying scalar outside HardBranchScope");
    std::abort();
  }
#endif
}
}  // namespace detail

// RAII marker for the few places where reading the primal of a dual number to
// pick a branch is legitimate: both branch arms compute the same smooth
// function (stable sigmoid/softplus forms), or the read never enters the value
// path (lse max shift, the hard sort inside soft_topk, provenance argmax).
struct HardBranchScope {
  HardBranchScope() { ++detail::hard_branch_scope_depth; }
  ~HardBranchScope() { --detail::hard_branch_scope_depth; }
  HardBranchScope(const HardBranchScope&) = delete;
  HardBranchScope& operator=(const HardBranchScope&) = delete;
};

template <int N, class B = double>
struct Dual {
  static_assert(N >= 1);
  using Base = B;
  static constexpr int tangent_width = N;

  B v{};
  std::array<B, N> d{};

  Dual() = default;

  template <class S>
    requires std::is_arithmetic_v<S>
  Dual(S s) : v(static_cast<B>(s)) {}  // NOLINT: implicit promotion intended

  Dual(const B& base)
    requires(!std::is_arithmetic_v<B>)
      : v(base) {}

  static Dual seeded(const B& value, int direction) {
    Dual r;
    r.v = value;
    r.d[direction] = B(1);
    return r;
  }

  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (int i = 0; i < N; ++i) d[i] += o.d[i];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (int i = 0; i < N; ++i) d[i] -= o.d[i];
    return *this;
  }
  Dual& operator*=(const Dual& o) { return *this = *this * o; }
  Dual& operator/=(const Dual& o) { return *this = *this / o; }

  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator-(const Dual& a) {
    Dual r;
    r.v = -a.v;
    for (int i = 0; i < N; ++i) r.d[i] = -a.d[i];
    return r;
  }
  friend Dual operator*(const Dual& a, const Dual& b) {
    Dual r;
    r.v = a.v * b.v;
    for (int i = 0; i < N; ++i) r.d[i] = a.v * b.d[i] + a.d[i] * b.v;
    return r;
  }
  friend Dual operator/(const Dual& a, const Dual& b) {
    Dual r;
    const B inv = B(1) / b.v;
    r.v = a.v * inv;
    for (int i = 0; i < N; ++i) r.d[i] = (a.d[i] - r.v * b.d[i]) * inv;
    return r;
  }

  // Comparisons read the primal only. Under CMG_CHECK_BRANCHES they assert
  // that the caller opted in via HardBranchScope.
  friend bool operator<(const Dual& a, const Dual& b) {
    detail::note_hard_branch();
    return a.v < b.v;
  }
  friend bool operator>(const Dual& a, const Dual& b) {
    detail::note_hard_branch();
    return a.v > b.v;
  }
  friend bool operator<=(const Dual& a, const Dual& b) {
    detail::note_hard_branch();
    return a.v <= b.v;
  }
  friend bool operator>=(const Dual& a, const Dual& b) {
    detail::note_hard_branch();
    return a.v >= b.v;
  }
  friend bool operator==(const Dual& a, const Dual& b) {
    detail::note_hard_branch();
    return a.v == b.v;
  }
};

// --- primal access -----------------------------------------------------------

inline double primal(double x) { return x; }
template <int N, class B>
double primal(const Dual<N, B>& x) {
  return primal(x.v);
}

template <class T>
struct tangent_width {
  static constexpr int value = 0;
};
template <int N, class B>
struct tangent_width<Dual<N, B>> {
  static constexpr int value = N;
};

// --- elementary functions ----------------------------------------------------
// Primal parts call the identical std:: routine a plain-double computation
// would, so primal values of a dual run bit-match the double run.

template <int N, class B>
Dual<N, B> exp(const Dual<N, B>& x) {
  using std::exp;
  Dual<N, B> r;
  r.v = exp(x.v);
  for (int i = 0; i < N; ++i) r.d[i] = r.v * x.d[i];
  return r;
}

template <int N, class B>
Dual<N, B> log(const Dual<N, B>& x) {
  using std::log;
  Dual<N, B> r;
  r.v = log(x.v);
  const B inv = B(1) / x.v;
  for (int i = 0; i < N; ++i) r.d[i] = x.d[i] * inv;
  return r;
}

template <int N, class B>
Dual<N, B> log1p(const Dual<N, B>& x) {
  using std::log1p;
  Dual<N, B> r;
  r.v = log1p(x.v);
  const B inv = B(1) / (B(1) + x.v);
  for (int i = 0; i < N; ++i) r.d[i] = x.d[i] * inv;
  return r;
}

template <int N, class B>
Dual<N, B> sqrt(const Dual<N, B>& x) {
  using std::sqrt;
  Dual<N, B> r;
  r.v = sqrt(x.v);
  const B half_inv = B(0.5) / r.v;
  for (int i = 0; i < N; ++i) r.d[i] = x.d[i] * half_inv;
  return r;
}

template <int N, class B>
Dual<N, B> tanh(const Dual<N, B>& x) {
  using std::tanh;
  Dual<N, B> r;
  r.v = tanh(x.v);
  const B sech2 = B(1) - r.v * r.v;
  for (int i = 0; i < N; ++i) r.d[i] = x.d[i] * sech2;
  return r;
}

template <int N, class B>
Dual<N, B> sin(const Dual<N, B>& x) {
  using std::cos;
  using std::sin;
  Dual<N, B> r;
  r.v = sin(x.v);
  const B cv = cos(x.v);
  for (int i = 0; i < N; ++i) r.d[i] = x.d[i] * cv;
  return r;
}

template <int N, class B>
Dual<N, B> cos(const Dual<N, B>& x) {
  using std::cos;
  using std::sin;
  Dual<N, B> r;
  r.v = cos(x.v);
  const B sv = sin(x.v);
  for (int i = 0; i < N; ++i) r.d[i] = -(x.d[i] * sv);
  return r;
}

// Power with a constant (non-differentiated) exponent.
template <int N, class B>
Dual<N, B> pow(const Dual<N, B>& x, double p) {
  using std::pow;
  Dual<N, B> r;
  r.v = pow(x.v, p);
  const B factor = B(p) * pow(x.v, p - 1.0);
  for (int i = 0; i < N; ++i) r.d[i] = x.d[i] * factor;
  return r;
}

// |x| with subgradient 0 at the kink. Smooth kernels must not call this; it
// exists for the softsort |s_k - x_i| distances, which are only nonsmooth on
// ties.
template <int N, class B>
Dual<N, B> fabs(const Dual<N, B>& x) {
  Dual<N, B> r;
  const double s = primal(x) < 0.0 ? -1.0 : (primal(x) > 0.0 ? 1.0 : 0.0);
  using std::fabs;
  r.v = fabs(x.v);
  for (int i = 0; i < N; ++i) r.d[i] = x.d[i] * B(s);
  return r;
}

// --- pose seeding / jacobian extraction --------------------------------------

using Dual12 = Dual<12, double>;

// Seeds two 6-vectors so directions 0..5 track pose 1 and 6..11 track pose 2.
template <class D = Dual12>
std::pair<std::array<D, 6>, std::array<D, 6>> seed_pose_tangents(
    const std::array<double, 6>& pose1, const std::array<double, 6>& pose2) {
  static_assert(D::tangent_width >= 12, "need 12 tangent slots for two 6D poses");
  std::pair<std::array<D, 6>, std::array<D, 6>> out;
  for (int i = 0; i < 6; ++i) {
    out.first[i] = D::seeded(pose1[i], i);
    out.second[i] = D::seeded(pose2[i], 6 + i);
  }
  return out;
}

// Row i of the result is the tangent vector of outputs[i].
template <int N, class B>
std::vector<std::array<double, N>> extract_jacobian(const std::vector<Dual<N, B>>& outputs) {
  std::vector<std::array<double, N>> rows(outputs.size());
  for (size_t i = 0; i < outputs.size(); ++i)
    for (int j = 0; j < N; ++j) rows[i][j] = primal(outputs[i].d[j]);
  return rows;
}

}  // namespace cmg
