#pragma once

#include <array>
#include <cmath>

namespace drr::ad {

// Forward-mode dual number carrying N tangent components. Used as the
// alternative backend for the 6-parameter pose path; subgradient
// conventions match the tape (min/max to the attained argument, ties to
// the first).
template <int N>
struct Dual {
  double v = 0.0;
  std::array<double, N> d{};

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT: implicit constant lift

  static Dual seeded(double value, int k) {
    Dual out(value);
    out.d[k] = 1.0;
    return out;
  }
};

template <int N>
inline Dual<N> operator+(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> o(a.v + b.v);
  for (int i = 0; i < N; ++i) o.d[i] = a.d[i] + b.d[i];
  return o;
}
template <int N>
inline Dual<N> operator-(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> o(a.v - b.v);
  for (int i = 0; i < N; ++i) o.d[i] = a.d[i] - b.d[i];
  return o;
}
template <int N>
inline Dual<N> operator-(const Dual<N>& a) {
  Dual<N> o(-a.v);
  for (int i = 0; i < N; ++i) o.d[i] = -a.d[i];
  return o;
}
template <int N>
inline Dual<N> operator*(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> o(a.v * b.v);
  for (int i = 0; i < N; ++i) o.d[i] = a.d[i] * b.v + a.v * b.d[i];
  return o;
}
template <int N>
inline Dual<N> operator/(const Dual<N>& a, const Dual<N>& b) {
  const double inv = 1.0 / b.v;
  Dual<N> o(a.v * inv);
  for (int i = 0; i < N; ++i) o.d[i] = (a.d[i] - o.v * b.d[i]) * inv;
  return o;
}
template <int N>
inline Dual<N>& operator+=(Dual<N>& a, const Dual<N>& b) { a = a + b; return a; }
template <int N>
inline Dual<N>& operator-=(Dual<N>& a, const Dual<N>& b) { a = a - b; return a; }
template <int N>
inline Dual<N>& operator*=(Dual<N>& a, const Dual<N>& b) { a = a * b; return a; }

template <int N>
inline Dual<N> exp(const Dual<N>& a) {
  const double e = std::exp(a.v);
  Dual<N> o(e);
  for (int i = 0; i < N; ++i) o.d[i] = e * a.d[i];
  return o;
}
template <int N>
inline Dual<N> log(const Dual<N>& a) {
  Dual<N> o(std::log(a.v));
  const double inv = 1.0 / a.v;
  for (int i = 0; i < N; ++i) o.d[i] = inv * a.d[i];
  return o;
}
template <int N>
inline Dual<N> sin(const Dual<N>& a) {
  Dual<N> o(std::sin(a.v));
  const double c = std::cos(a.v);
  for (int i = 0; i < N; ++i) o.d[i] = c * a.d[i];
  return o;
}
template <int N>
inline Dual<N> cos(const Dual<N>& a) {
  Dual<N> o(std::cos(a.v));
  const double s = -std::sin(a.v);
  for (int i = 0; i < N; ++i) o.d[i] = s * a.d[i];
  return o;
}
template <int N>
inline Dual<N> sqrt(const Dual<N>& a) {
  const double s = std::sqrt(a.v);
  Dual<N> o(s);
  const double w = 0.5 / s;
  for (int i = 0; i < N; ++i) o.d[i] = w * a.d[i];
  return o;
}
template <int N>
inline Dual<N> acos(const Dual<N>& a) {
  Dual<N> o(std::acos(a.v));
  const double w = -1.0 / std::sqrt(1.0 - a.v * a.v);
  for (int i = 0; i < N; ++i) o.d[i] = w * a.d[i];
  return o;
}
template <int N>
inline Dual<N> max(const Dual<N>& a, const Dual<N>& b) {
  return a.v >= b.v ? a : b;
}
template <int N>
inline Dual<N> min(const Dual<N>& a, const Dual<N>& b) {
  return a.v <= b.v ? a : b;
}
template <int N>
inline Dual<N> abs(const Dual<N>& a) {
  return a.v >= 0.0 ? a : -a;
}
template <int N>
inline Dual<N> madd(const Dual<N>& a, const Dual<N>& b, const Dual<N>& c) {
  return a * b + c;
}
template <int N>
inline Dual<N> axpy(double s, const Dual<N>& b, const Dual<N>& a) {
  Dual<N> o(a.v + s * b.v);
  for (int i = 0; i < N; ++i) o.d[i] = a.d[i] + s * b.d[i];
  return o;
}

template <int N>
inline double value_of(const Dual<N>& a) {
  return a.v;
}

}  // namespace drr::ad
