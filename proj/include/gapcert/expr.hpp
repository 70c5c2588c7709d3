#pragma once

// Immutable expression trees over +, -, *, /, ln and integer powers with
// machine-word integer leaves. Pure-rational subtrees are folded to exact
// GMP rationals at construction time, so a Ln node's child is either an
// exact positive rational constant or itself transcendental.
//
// Expressions evaluate through either enclosure tier (DoubleInterval or
// CertifiedValue at a chosen precision) and, when they are linear in
// logarithms of rationals, normalize to the canonical form
//     constant + sum_i coeff_i * ln(prime_i)
// which makes exact equality and pure-logarithm comparisons decidable.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <utility>

#include "gapcert/interval.hpp"
#include "gapcert/primality.hpp"

namespace gapcert::certnum {

class Expr {
 public:
  static Expr integer(std::uint64_t v) { return constant(mpq_class(static_cast<unsigned long>(v))); }

  static Expr integer(std::int64_t v) { return constant(mpq_class(static_cast<long>(v))); }
  static Expr integer(int v) { return constant(mpq_class(v)); }

  static Expr rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    mpq_class q(static_cast<long>(num), static_cast<long>(den));
    q.canonicalize();
    return constant(q);
  }

  static Expr constant(const mpq_class& q) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::kConstant;
    n->value = q;
    return Expr(std::move(n));
  }

  static Expr ln(const Expr& arg) {
    if (arg.node_->kind == Kind::kConstant) {
      const mpq_class& q = arg.node_->value;
      if (sgn(q) <= 0) throw DomainError("ln of a non-positive constant");
      if (q == 1) return constant(mpq_class(0));
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::kLn;
    n->lhs = arg.node_;
    return Expr(std::move(n));
  }

  Expr pow(std::int64_t exponent) const {
    if (node_->kind == Kind::kConstant) {
      const mpq_class& q = node_->value;
      if (exponent == 0) return constant(mpq_class(1));
      if (q == 0 && exponent < 0) throw DomainError("zero raised to a negative power");
      mpq_class r;
      const unsigned long mag =
          exponent < 0 ? static_cast<unsigned long>(-(exponent + 1)) + 1 : static_cast<unsigned long>(exponent);
      mpz_pow_ui(r.get_num_mpz_t(), q.get_num_mpz_t(), mag);
      mpz_pow_ui(r.get_den_mpz_t(), q.get_den_mpz_t(), mag);
      r.canonicalize();
      if (exponent < 0) r = 1 / r;
      return constant(r);
    }
    if (exponent == 0) return constant(mpq_class(1));
    if (exponent == 1) return *this;
    auto n = std::make_shared<Node>();
    n->kind = Kind::kPow;
    n->lhs = node_;
    n->exponent = exponent;
    return Expr(std::move(n));
  }

  friend Expr operator+(const Expr& a, const Expr& b) { return binary(Kind::kAdd, a, b); }
  friend Expr operator-(const Expr& a, const Expr& b) { return binary(Kind::kSub, a, b); }
  friend Expr operator*(const Expr& a, const Expr& b) { return binary(Kind::kMul, a, b); }
  friend Expr operator/(const Expr& a, const Expr& b) {
    if (b.node_->kind == Kind::kConstant && b.node_->value == 0) throw DomainError("division by zero constant");
    return binary(Kind::kDiv, a, b);
  }

  bool is_constant() const { return node_->kind == Kind::kConstant; }
  const mpq_class& constant_value() const { return node_->value; }

  DoubleInterval eval_double() const { return eval_double(*node_); }
  CertifiedValue eval_certified(mpfr_prec_t precision_bits) const { return eval_certified(*node_, precision_bits); }

  // constant + sum of coeff * ln(prime); present only when the expression is
  // linear in logarithms of word-sized rationals.
  struct LinearLnForm {
    std::map<std::uint64_t, mpq_class> log_coeffs;
    mpq_class constant;

    bool log_free() const { return log_coeffs.empty(); }
  };

  std::optional<LinearLnForm> normalize_linear() const { return normalize(*node_); }

 private:
  enum class Kind { kConstant, kLn, kAdd, kSub, kMul, kDiv, kPow };

  struct Node {
    Kind kind = Kind::kConstant;
    mpq_class value;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
    std::int64_t exponent = 0;
  };

  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Expr binary(Kind kind, const Expr& a, const Expr& b) {
    if (a.node_->kind == Kind::kConstant && b.node_->kind == Kind::kConstant) {
      const mpq_class& x = a.node_->value;
      const mpq_class& y = b.node_->value;
      switch (kind) {
        case Kind::kAdd: return constant(x + y);
        case Kind::kSub: return constant(x - y);
        case Kind::kMul: return constant(x * y);
        case Kind::kDiv:
          if (y == 0) throw DomainError("division by zero constant");
          return constant(x / y);
        default: break;
      }
    }
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->lhs = a.node_;
    n->rhs = b.node_;
    return Expr(std::move(n));
  }

  static DoubleInterval eval_double(const Node& n) {
    switch (n.kind) {
      case Kind::kConstant: {
        const double d = mpq_get_d(n.value.get_mpq_t());  // rounds toward zero
        return {detail::out_down(d), detail::out_up(d)};
      }
      case Kind::kLn: return eval_double(*n.lhs).ln();
      case Kind::kAdd: return eval_double(*n.lhs) + eval_double(*n.rhs);
      case Kind::kSub: return eval_double(*n.lhs) - eval_double(*n.rhs);
      case Kind::kMul: return eval_double(*n.lhs) * eval_double(*n.rhs);
      case Kind::kDiv: return eval_double(*n.lhs) / eval_double(*n.rhs);
      case Kind::kPow: {
        DoubleInterval base = eval_double(*n.lhs);
        DoubleInterval acc = DoubleInterval::exact(1.0);
        std::int64_t e = n.exponent;
        const bool invert = e < 0;
        std::uint64_t k = invert ? static_cast<std::uint64_t>(-(e + 1)) + 1 : static_cast<std::uint64_t>(e);
        while (k != 0) {
          if (k & 1) acc = acc * base;
          base = base * base;
          k >>= 1;
        }
        if (invert) return DoubleInterval::exact(1.0) / acc;
        return acc;
      }
    }
    throw std::logic_error("unreachable expression kind");
  }

  static CertifiedValue eval_certified(const Node& n, mpfr_prec_t prec) {
    switch (n.kind) {
      case Kind::kConstant: return CertifiedValue::from_rational(n.value, prec);
      case Kind::kLn: return gapcert::certnum::ln(eval_certified(*n.lhs, prec));
      case Kind::kAdd: return eval_certified(*n.lhs, prec) + eval_certified(*n.rhs, prec);
      case Kind::kSub: return eval_certified(*n.lhs, prec) - eval_certified(*n.rhs, prec);
      case Kind::kMul: return eval_certified(*n.lhs, prec) * eval_certified(*n.rhs, prec);
      case Kind::kDiv: return eval_certified(*n.lhs, prec) / eval_certified(*n.rhs, prec);
      case Kind::kPow: return pow_int(eval_certified(*n.lhs, prec), static_cast<long>(n.exponent));
    }
    throw std::logic_error("unreachable expression kind");
  }

  // Splits a positive word-sized rational into prime factors and adds
  // sign * multiplicity to the coefficient map.
  static bool add_ln_of_rational(const mpq_class& q, const mpq_class& scale, LinearLnForm& form) {
    if (sgn(q) <= 0) throw DomainError("ln of a non-positive constant");
    if (!q.get_num().fits_ulong_p() || !q.get_den().fits_ulong_p()) return false;
    const std::uint64_t num = q.get_num().get_ui();
    const std::uint64_t den = q.get_den().get_ui();
    for (const auto& [prime, mult] : factorize_u64(num)) form.log_coeffs[prime] += scale * static_cast<long>(mult);
    for (const auto& [prime, mult] : factorize_u64(den)) form.log_coeffs[prime] -= scale * static_cast<long>(mult);
    return true;
  }

  static void prune(LinearLnForm& form) {
    for (auto it = form.log_coeffs.begin(); it != form.log_coeffs.end();) {
      if (it->second == 0) {
        it = form.log_coeffs.erase(it);
      } else {
        ++it;
      }
    }
  }

  static std::optional<LinearLnForm> normalize(const Node& n) {
    switch (n.kind) {
      case Kind::kConstant: {
        LinearLnForm f;
        f.constant = n.value;
        return f;
      }
      case Kind::kLn: {
        if (n.lhs->kind != Kind::kConstant) return std::nullopt;
        LinearLnForm f;
        if (!add_ln_of_rational(n.lhs->value, mpq_class(1), f)) return std::nullopt;
        prune(f);
        return f;
      }
      case Kind::kAdd:
      case Kind::kSub: {
        auto a = normalize(*n.lhs);
        auto b = normalize(*n.rhs);
        if (!a || !b) return std::nullopt;
        const int sign = n.kind == Kind::kAdd ? 1 : -1;
        for (const auto& [p, c] : b->log_coeffs) a->log_coeffs[p] += sign * c;
        a->constant += sign * b->constant;
        prune(*a);
        return a;
      }
      case Kind::kMul: {
        auto a = normalize(*n.lhs);
        auto b = normalize(*n.rhs);
        if (!a || !b) return std::nullopt;
        if (!b->log_free() && !a->log_free()) return std::nullopt;  // nonlinear in ln
        if (!a->log_free()) std::swap(a, b);
        // a is log-free: scale b by a->constant
        for (auto& [p, c] : b->log_coeffs) c *= a->constant;
        b->constant *= a->constant;
        prune(*b);
        return b;
      }
      case Kind::kDiv: {
        auto a = normalize(*n.lhs);
        auto b = normalize(*n.rhs);
        if (!a || !b) return std::nullopt;
        if (!b->log_free()) return std::nullopt;
        if (b->constant == 0) throw DomainError("division by zero constant");
        for (auto& [p, c] : a->log_coeffs) c /= b->constant;
        a->constant /= b->constant;
        prune(*a);
        return a;
      }
      case Kind::kPow: {
        // Constant bases fold at construction; a surviving Pow node has a
        // transcendental child and is nonlinear in ln unless trivial.
        if (n.exponent == 1) return normalize(*n.lhs);
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  std::shared_ptr<const Node> node_;
};

}  // namespace gapcert::certnum
