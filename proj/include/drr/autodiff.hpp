#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace drr::ad {

// Thrown when a forward-pass primitive produces NaN from finite inputs.
struct NanError : std::runtime_error {
  explicit NanError(const char* op)
      : std::runtime_error(std::string("NaN produced in forward pass by primitive '") + op + "'"),
        primitive(op) {}
  const char* primitive;
};

// Reverse-mode tape. Nodes store up to three parents with precomputed
// local partials; values live on the Var itself, so the backward sweep
// touches nothing but partials and adjoints.
//
// One tape is active per thread (Tape::Scope). A tape is confined to the
// thread that records on it; independent tapes may run concurrently.
class Tape {
 public:
  struct Node {
    double w[3];
    std::int32_t p[3];
  };

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  class Scope {
   public:
    explicit Scope(Tape& t) : prev_(active_) { active_ = &t; }
    ~Scope() { active_ = prev_; }
    Scope(const Scope&) = delete;
    Scope& operator=(const Scope&) = delete;

   private:
    Tape* prev_;
  };

  static Tape* active() { return active_; }

  std::size_t size() const { return nodes_.size(); }

  // Drops all nodes but keeps capacity; adjoints are invalidated.
  void reset() {
    nodes_.clear();
    adj_.clear();
  }

  std::int32_t new_leaf() {
    return push({{0, 0, 0}, {-1, -1, -1}});
  }

  std::int32_t new_node1(std::int32_t p0, double w0) {
    return push({{w0, 0, 0}, {p0, -1, -1}});
  }

  std::int32_t new_node2(std::int32_t p0, double w0, std::int32_t p1, double w1) {
    return push({{w0, w1, 0}, {p0, p1, -1}});
  }

  std::int32_t new_node3(std::int32_t p0, double w0, std::int32_t p1, double w1, std::int32_t p2,
                         double w2) {
    return push({{w0, w1, w2}, {p0, p1, p2}});
  }

  // Single reverse sweep seeded at `output`; afterwards adjoint(i) holds
  // d(output)/d(node i).
  void backward(std::int32_t output) {
    if (output < 0 || output >= static_cast<std::int32_t>(nodes_.size()))
      throw std::logic_error("backward: output is not a recorded node");
    adj_.assign(nodes_.size(), 0.0);
    adj_[static_cast<std::size_t>(output)] = 1.0;
    for (std::int32_t i = static_cast<std::int32_t>(nodes_.size()) - 1; i >= 0; --i) {
      const double a = adj_[static_cast<std::size_t>(i)];
      if (a == 0.0) continue;
      const Node& n = nodes_[static_cast<std::size_t>(i)];
      for (int k = 0; k < 3; ++k) {
        if (n.p[k] >= 0) adj_[static_cast<std::size_t>(n.p[k])] += n.w[k] * a;
      }
    }
  }

  double adjoint(std::int32_t idx) const {
    if (idx < 0) return 0.0;  // constants carry no gradient
    return adj_[static_cast<std::size_t>(idx)];
  }

 private:
  std::int32_t push(const Node& n) {
    nodes_.push_back(n);
    return static_cast<std::int32_t>(nodes_.size() - 1);
  }

  static thread_local Tape* active_;
  std::vector<Node> nodes_;
  std::vector<double> adj_;
};

// Scalar with an optional slot on the active tape. idx < 0 marks a
// constant: operations where every operand is constant fold to a constant
// and never touch the tape, so forward-only evaluation is plain double
// arithmetic (and bitwise identical to the recorded evaluation).
struct Var {
  double v = 0.0;
  std::int32_t idx = -1;

  Var() = default;
  Var(double value) : v(value), idx(-1) {}  // NOLINT: implicit constant lift
  Var(double value, std::int32_t i) : v(value), idx(i) {}

  bool is_const() const { return idx < 0; }
};

inline Var make_leaf(double value) {
  Tape* t = Tape::active();
  if (!t) throw std::logic_error("make_leaf: no active tape on this thread");
  return Var(value, t->new_leaf());
}

namespace detail {

inline void check_nan(double v, const char* op) {
  if (std::isnan(v)) throw NanError(op);
}

inline Var unary(double v, const Var& a, double wa, const char* op) {
  check_nan(v, op);
  if (a.is_const()) return Var(v);
  return Var(v, Tape::active()->new_node1(a.idx, wa));
}

inline Var binary(double v, const Var& a, double wa, const Var& b, double wb, const char* op) {
  check_nan(v, op);
  if (a.is_const() && b.is_const()) return Var(v);
  Tape* t = Tape::active();
  if (a.is_const()) return Var(v, t->new_node1(b.idx, wb));
  if (b.is_const()) return Var(v, t->new_node1(a.idx, wa));
  return Var(v, t->new_node2(a.idx, wa, b.idx, wb));
}

inline Var ternary(double v, const Var& a, double wa, const Var& b, double wb, const Var& c,
                   double wc, const char* op) {
  check_nan(v, op);
  if (a.is_const() && b.is_const() && c.is_const()) return Var(v);
  Tape* t = Tape::active();
  // Pack the non-constant parents.
  std::int32_t p[3];
  double w[3];
  int n = 0;
  if (!a.is_const()) { p[n] = a.idx; w[n] = wa; ++n; }
  if (!b.is_const()) { p[n] = b.idx; w[n] = wb; ++n; }
  if (!c.is_const()) { p[n] = c.idx; w[n] = wc; ++n; }
  if (n == 1) return Var(v, t->new_node1(p[0], w[0]));
  if (n == 2) return Var(v, t->new_node2(p[0], w[0], p[1], w[1]));
  return Var(v, t->new_node3(p[0], w[0], p[1], w[1], p[2], w[2]));
}

}  // namespace detail

inline Var operator+(const Var& a, const Var& b) {
  return detail::binary(a.v + b.v, a, 1.0, b, 1.0, "add");
}
inline Var operator-(const Var& a, const Var& b) {
  return detail::binary(a.v - b.v, a, 1.0, b, -1.0, "sub");
}
inline Var operator*(const Var& a, const Var& b) {
  return detail::binary(a.v * b.v, a, b.v, b, a.v, "mul");
}
inline Var operator/(const Var& a, const Var& b) {
  const double inv = 1.0 / b.v;
  return detail::binary(a.v * inv, a, inv, b, -a.v * inv * inv, "div");
}
inline Var operator-(const Var& a) { return detail::unary(-a.v, a, -1.0, "neg"); }
inline Var& operator+=(Var& a, const Var& b) { a = a + b; return a; }
inline Var& operator-=(Var& a, const Var& b) { a = a - b; return a; }
inline Var& operator*=(Var& a, const Var& b) { a = a * b; return a; }

inline Var exp(const Var& a) {
  const double e = std::exp(a.v);
  return detail::unary(e, a, e, "exp");
}
inline Var log(const Var& a) {
  return detail::unary(std::log(a.v), a, 1.0 / a.v, "log");
}
inline Var sin(const Var& a) { return detail::unary(std::sin(a.v), a, std::cos(a.v), "sin"); }
inline Var cos(const Var& a) { return detail::unary(std::cos(a.v), a, -std::sin(a.v), "cos"); }
inline Var sqrt(const Var& a) {
  const double s = std::sqrt(a.v);
  return detail::unary(s, a, 0.5 / s, "sqrt");
}
inline Var acos(const Var& a) {
  return detail::unary(std::acos(a.v), a, -1.0 / std::sqrt(1.0 - a.v * a.v), "acos");
}
// Subgradient conventions: min/max route the gradient to the attained
// argument, ties to the first; abs uses +1 at zero (== max(x, -x)).
inline Var max(const Var& a, const Var& b) {
  const bool first = a.v >= b.v;
  return detail::binary(first ? a.v : b.v, a, first ? 1.0 : 0.0, b, first ? 0.0 : 1.0, "max");
}
inline Var min(const Var& a, const Var& b) {
  const bool first = a.v <= b.v;
  return detail::binary(first ? a.v : b.v, a, first ? 1.0 : 0.0, b, first ? 0.0 : 1.0, "min");
}
inline Var abs(const Var& a) {
  return detail::unary(std::fabs(a.v), a, a.v >= 0.0 ? 1.0 : -1.0, "abs");
}
// Fused a*b + c in one node.
inline Var madd(const Var& a, const Var& b, const Var& c) {
  return detail::ternary(a.v * b.v + c.v, a, b.v, b, a.v, c, 1.0, "madd");
}
// Fused a + s*b with a constant scale; the render inner loop lives on this.
inline Var axpy(double s, const Var& b, const Var& a) {
  return detail::binary(a.v + s * b.v, a, 1.0, b, s, "axpy");
}

inline double value_of(const Var& a) { return a.v; }

// ---------------------------------------------------------------------------
// record_and_grad / check_gradient

struct GradResult {
  double value = 0.0;
  std::vector<double> grad;
};

// Records `f` applied to leaves created from `params` on a fresh tape and
// returns the value together with d(value)/d(params). The gradient is the
// exact derivative of the recorded composition.
template <class F>
GradResult record_and_grad(F&& f, std::span<const double> params) {
  Tape tape;
  Tape::Scope scope(tape);
  std::vector<Var> leaves;
  leaves.reserve(params.size());
  for (double p : params) leaves.push_back(make_leaf(p));
  Var out = f(std::span<const Var>(leaves));
  GradResult res;
  res.value = out.v;
  res.grad.resize(params.size());
  if (out.is_const()) {
    // Output does not depend on the inputs; gradient is exactly zero.
    return res;
  }
  tape.backward(out.idx);
  for (std::size_t i = 0; i < leaves.size(); ++i) res.grad[i] = tape.adjoint(leaves[i].idx);
  return res;
}

// Forward-only evaluation: constants never touch a tape, so this is plain
// double arithmetic through the same expressions.
template <class F>
double eval_plain(F&& f, std::span<const double> params) {
  std::vector<Var> consts;
  consts.reserve(params.size());
  for (double p : params) consts.emplace_back(p);
  return f(std::span<const Var>(consts)).v;
}

struct GradCheckEntry {
  double analytic = 0.0;
  double fd = 0.0;
  double rel_err = 0.0;
  bool subgradient = false;  // kink detected; excluded from pass/fail
  bool pass = true;
};

struct GradReport {
  double value = 0.0;
  double step = 0.0;
  double tol = 0.0;
  std::vector<GradCheckEntry> entries;

  bool all_pass() const {
    for (const auto& e : entries)
      if (!e.subgradient && !e.pass) return false;
    return true;
  }
};

// Central finite differences against the recorded gradient. Parameters
// sitting on a kink (detected via the second difference) are flagged as
// subgradient points and excluded from pass/fail.
template <class F>
GradReport check_gradient(F&& f, std::span<const double> params, double step, double tol) {
  if (step <= 0.0) throw std::invalid_argument("check_gradient: step must be positive");
  GradReport report;
  report.step = step;
  report.tol = tol;
  GradResult res = record_and_grad(f, params);
  report.value = res.value;
  std::vector<double> work(params.begin(), params.end());
  for (std::size_t i = 0; i < params.size(); ++i) {
    GradCheckEntry e;
    e.analytic = res.grad[i];
    const double saved = work[i];
    work[i] = saved + step;
    const double fp = eval_plain(f, work);
    work[i] = saved - step;
    const double fm = eval_plain(f, work);
    work[i] = saved;
    e.fd = (fp - fm) / (2.0 * step);
    const double second_diff = std::fabs(fp + fm - 2.0 * res.value);
    e.subgradient = second_diff > 0.5 * step * std::max(1.0, std::fabs(res.value));
    e.rel_err = std::fabs(e.analytic - e.fd) /
                std::max({std::fabs(e.analytic), std::fabs(e.fd), 1e-8});
    e.pass = e.rel_err < tol;
    report.entries.push_back(e);
  }
  return report;
}

}  // namespace drr::ad
