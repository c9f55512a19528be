#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>

#include "dproj/error.hpp"

namespace dproj {

/// Exact p/q with q > 0, reduced, |p|,|q| <= 2^40. Dilation factors and
/// interval endpoints are carried as Rationals so covers are computed exactly.
class Rational {
 public:
  static constexpr std::int64_t kLimit = std::int64_t{1} << 40;

  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  /// Accepts "p", "p/q", or a finite decimal such as "1.375".
  static Rational parse(std::string_view text);
  /// Nearest value k / 2^bits.
  static Rational dyadic_approx(double value, int bits);

  [[nodiscard]] std::int64_t num() const { return num_; }
  [[nodiscard]] std::int64_t den() const { return den_; }
  [[nodiscard]] double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  [[nodiscard]] bool is_zero() const { return num_ == 0; }
  [[nodiscard]] bool is_integer() const { return den_ == 1; }
  [[nodiscard]] std::string str() const;

  friend Rational operator-(Rational a) { return {-a.num_, a.den_}; }
  friend Rational operator+(Rational a, Rational b);
  friend Rational operator-(Rational a, Rational b) { return a + (-b); }
  friend Rational operator*(Rational a, Rational b);
  friend Rational operator/(Rational a, Rational b);
  friend bool operator==(Rational a, Rational b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator<(Rational a, Rational b) {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// floor(a / b) and ceil(a / b) for b > 0 on 128-bit integers.
inline __int128 floor_div(__int128 a, __int128 b) {
  __int128 q = a / b;
  if ((a % b != 0) && (a < 0)) --q;
  return q;
}
inline __int128 ceil_div(__int128 a, __int128 b) {
  __int128 q = a / b;
  if ((a % b != 0) && (a > 0)) ++q;
  return q;
}

}  // namespace dproj
