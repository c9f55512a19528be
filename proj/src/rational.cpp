#include "dproj/rational.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

namespace dproj {
namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Rational make_checked(__int128 num, __int128 den) {
  require(den != 0, "Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const __int128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  require(num <= Rational::kLimit && num >= -Rational::kLimit && den <= Rational::kLimit,
          "Rational: value not representable with |p|, |q| <= 2^40");
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  const auto* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  require(ec == std::errc{} && ptr == s.data() + s.size() && first != s.data() + s.size(),
          "cannot parse rational '" + std::string(whole) + "'");
  return v;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  require(den != 0, "Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = g > 1 ? num / g : num;
  den_ = g > 1 ? den / g : den;
  require(num_ <= kLimit && num_ >= -kLimit && den_ <= kLimit,
          "Rational: value not representable with |p|, |q| <= 2^40");
}

Rational Rational::parse(std::string_view text) {
  require(!text.empty(), "cannot parse empty rational");
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    return make_checked(parse_int(text.substr(0, slash), text), parse_int(text.substr(slash + 1), text));
  }
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    const auto int_part = text.substr(0, dot);
    const auto frac = text.substr(dot + 1);
    require(frac.size() <= 12, "rational '" + std::string(text) + "' has too many decimals");
    const bool negative = !int_part.empty() && int_part.front() == '-';
    const std::int64_t whole = int_part.empty() || int_part == "-" || int_part == "+"
                                   ? 0
                                   : parse_int(int_part, text);
    const std::int64_t f = frac.empty() ? 0 : parse_int(frac, text);
    require(f >= 0, "cannot parse rational '" + std::string(text) + "'");
    __int128 den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const __int128 mag = static_cast<__int128>(whole < 0 ? -whole : whole) * den + f;
    return make_checked(negative ? -mag : mag, den);
  }
  return Rational(parse_int(text, text));
}

Rational Rational::dyadic_approx(double value, int bits) {
  require(std::isfinite(value), "Rational::dyadic_approx: non-finite value");
  require(bits >= 0 && bits <= 40, "Rational::dyadic_approx: bits out of range");
  const double scaled = std::nearbyint(std::ldexp(value, bits));
  return make_checked(static_cast<__int128>(scaled), static_cast<__int128>(1) << bits);
}

std::string Rational::str() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(Rational a, Rational b) {
  return make_checked(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                      static_cast<__int128>(a.den_) * b.den_);
}

Rational operator*(Rational a, Rational b) {
  return make_checked(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(Rational a, Rational b) {
  require(b.num_ != 0, "Rational: division by zero");
  return make_checked(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
}

}  // namespace dproj
