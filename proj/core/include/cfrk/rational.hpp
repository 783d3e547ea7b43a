#ifndef CFRK_RATIONAL_HPP
#define CFRK_RATIONAL_HPP

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cfrk {

// Exact rational on int64. Costs, distances and weights are kept exact so
// solver-vs-oracle comparisons are equality checks, not tolerance checks.
// Intermediate products use __int128; results that do not fit int64 throw.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(long long n) : num_(n) {}  // NOLINT: implicit by design
  Rational(long long n, long long d) : num_(n), den_(d) { normalize_(); }

  long long num() const { return num_; }
  long long den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  bool is_negative() const { return num_ < 0; }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  // Smallest integer >= value.
  long long ceil() const {
    if (num_ >= 0) return (num_ + den_ - 1) / den_;
    return num_ / den_;
  }

  // "7" when integral, "7/2" otherwise.
  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  // Accepts "7", "-3/4", with optional surrounding whitespace.
  static std::optional<Rational> parse(std::string_view s);

  friend Rational operator+(const Rational& a, const Rational& b) {
    __int128 n = i128(a.num_) * b.den_ + i128(b.num_) * a.den_;
    __int128 d = i128(a.den_) * b.den_;
    return make_(n, d);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    __int128 n = i128(a.num_) * b.den_ - i128(b.num_) * a.den_;
    __int128 d = i128(a.den_) * b.den_;
    return make_(n, d);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return make_(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
    return make_(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
  }
  Rational operator-() const { return Rational(-num_, den_); }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  Rational abs() const { return num_ < 0 ? Rational(-num_, den_) : *this; }

  static Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
  static Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

 private:
  using i128 = __int128;

  static Rational make_(i128 n, i128 d) {
    Rational r;
    if (d == 0) throw std::domain_error("Rational: zero denominator");
    if (d < 0) { n = -n; d = -d; }
    i128 g = gcd128_(n < 0 ? -n : n, d);
    if (g > 1) { n /= g; d /= g; }
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
      throw std::overflow_error("Rational: value exceeds 64-bit range");
    r.num_ = static_cast<long long>(n);
    r.den_ = static_cast<long long>(d);
    return r;
  }

  static i128 gcd128_(i128 a, i128 b) {
    while (b != 0) { i128 t = a % b; a = b; b = t; }
    return a == 0 ? 1 : a;
  }

  void normalize_() {
    Rational r = make_(num_, den_);
    num_ = r.num_;
    den_ = r.den_;
  }

  long long num_ = 0;
  long long den_ = 1;
};

inline std::optional<Rational> Rational::parse(std::string_view s) {
  size_t b = s.find_first_not_of(" \t");
  size_t e = s.find_last_not_of(" \t");
  if (b == std::string_view::npos) return std::nullopt;
  s = s.substr(b, e - b + 1);
  auto parse_ll = [](std::string_view v, long long& out) -> bool {
    if (v.empty()) return false;
    bool neg = false;
    size_t i = 0;
    if (v[0] == '+' || v[0] == '-') { neg = v[0] == '-'; i = 1; }
    if (i == v.size()) return false;
    __int128 acc = 0;
    for (; i < v.size(); ++i) {
      if (v[i] < '0' || v[i] > '9') return false;
      acc = acc * 10 + (v[i] - '0');
      if (acc > INT64_MAX) return false;
    }
    out = static_cast<long long>(neg ? -acc : acc);
    return true;
  };
  size_t slash = s.find('/');
  long long n = 0, d = 1;
  if (slash == std::string_view::npos) {
    if (!parse_ll(s, n)) return std::nullopt;
  } else {
    if (!parse_ll(s.substr(0, slash), n)) return std::nullopt;
    if (!parse_ll(s.substr(slash + 1), d)) return std::nullopt;
    if (d == 0) return std::nullopt;
  }
  try {
    return Rational(n, d);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace cfrk

#endif  // CFRK_RATIONAL_HPP
