#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "grwalk/errors.hpp"
#include "grwalk/rational.hpp"

namespace grwalk {

namespace detail {

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

/// p^e, or nullopt once it exceeds 2^62.
inline std::optional<std::int64_t> checked_pow(std::int64_t p, int e) {
  constexpr std::int64_t kLimit = std::int64_t{1} << 62;
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > kLimit / p) return std::nullopt;
    r *= p;
  }
  return r;
}

inline std::int64_t ipow(std::int64_t p, int e) {
  auto r = checked_pow(p, e);
  if (!r) throw UsageError("p^" + std::to_string(e) + " exceeds 62-bit range");
  return *r;
}

inline std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>(static_cast<__int128>(a) * b % m);
}

inline std::int64_t mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

/// Inverse of a modulo m via the extended Euclidean algorithm.
inline std::int64_t invmod(std::int64_t a, std::int64_t m) {
  std::int64_t old_r = mod(a, m), r = m;
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::int64_t t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) throw DomainError("element is not invertible modulo " + std::to_string(m));
  return mod(old_s, m);
}

}  // namespace detail

/**
 * Element of Q_p carried at a fixed number of significant p-adic digits.
 *
 * A nonzero value is p^valuation * unit, where the unit is known modulo
 * p^precision and is not divisible by p. Zero is exact and unique.
 *
 * Precision is relative: a fresh value carries the configured number of
 * digits; addition with cancellation drops the digits it consumed. When a
 * sum cancels every digit known to both operands, the result is zero if
 * the operands were exact negatives at equal precision, and a
 * PrecisionError otherwise.
 */
class PAdicNumber {
 public:
  static constexpr int kDefaultPrecision = 8;

  /// Zero of Q_p.
  explicit PAdicNumber(int prime, int precision = kDefaultPrecision)
      : prime_(prime), precision_(precision) {
    validate_parameters(prime, precision);
  }

  static PAdicNumber from_integer(int prime, std::int64_t value,
                                  int precision = kDefaultPrecision) {
    return from_rational(prime, Rational(value), precision);
  }

  static PAdicNumber from_fraction(int prime, std::int64_t num, std::int64_t den,
                                   int precision = kDefaultPrecision) {
    if (den == 0) throw UsageError("zero denominator");
    return from_rational(prime, Rational(num, den), precision);
  }

  static PAdicNumber from_rational(int prime, const Rational& value,
                                   int precision = kDefaultPrecision) {
    PAdicNumber out(prime, precision);
    if (value == 0) return out;
    BigInt num = boost::multiprecision::numerator(value);
    BigInt den = boost::multiprecision::denominator(value);
    int v = 0;
    while (num % prime == 0) {
      num /= prime;
      ++v;
    }
    while (den % prime == 0) {
      den /= prime;
      --v;
    }
    const std::int64_t modulus = detail::ipow(prime, precision);
    BigInt n_mod = num % modulus;
    if (n_mod < 0) n_mod += modulus;
    const BigInt d_mod = den % modulus;
    const auto n64 = n_mod.convert_to<std::int64_t>();
    const auto d64 = d_mod.convert_to<std::int64_t>();
    out.valuation_ = v;
    out.unit_ = detail::mulmod(n64, detail::invmod(d64, modulus), modulus);
    out.zero_ = false;
    return out;
  }

  /// Builds p^valuation * unit from raw parts; unit is reduced mod p^precision.
  static PAdicNumber from_parts(int prime, int valuation, std::int64_t unit,
                                int precision = kDefaultPrecision) {
    PAdicNumber out(prime, precision);
    const std::int64_t modulus = detail::ipow(prime, precision);
    unit = detail::mod(unit, modulus);
    if (unit % prime == 0) throw UsageError("unit part must not be divisible by p");
    out.valuation_ = valuation;
    out.unit_ = unit;
    out.zero_ = false;
    return out;
  }

  int prime() const { return prime_; }
  /// Number of significant unit digits currently known.
  int precision() const { return precision_; }
  bool is_zero() const { return zero_; }

  /// Exponent of p; meaningless for zero (check is_zero first).
  int valuation() const {
    if (zero_) throw DomainError("valuation of zero is +infinity");
    return valuation_;
  }
  std::optional<int> valuation_or_infinity() const {
    if (zero_) return std::nullopt;
    return valuation_;
  }

  /// Unit part reduced modulo p^precision.
  std::int64_t unit() const { return unit_; }

  /// Base-p unit digits, least significant first; empty for zero.
  std::vector<int> digits() const {
    std::vector<int> out;
    if (zero_) return out;
    std::int64_t u = unit_;
    for (int i = 0; i < precision_; ++i) {
      out.push_back(static_cast<int>(u % prime_));
      u /= prime_;
    }
    return out;
  }

  PAdicNumber operator-() const {
    if (zero_) return *this;
    PAdicNumber out = *this;
    const std::int64_t modulus = detail::ipow(prime_, precision_);
    out.unit_ = modulus - unit_;
    return out;
  }

  friend PAdicNumber operator+(const PAdicNumber& x, const PAdicNumber& y) {
    x.require_same_field(y);
    if (x.zero_) return y;
    if (y.zero_) return x;
    const int m = std::min(x.valuation_, y.valuation_);
    const int absolute = std::min(x.valuation_ + x.precision_, y.valuation_ + y.precision_);
    const int relative = absolute - m;
    const int p = x.prime_;
    const std::int64_t modulus = detail::ipow(p, relative);
    auto shifted = [&](const PAdicNumber& z) -> std::int64_t {
      const int shift = z.valuation_ - m;
      if (shift >= relative) return 0;
      return detail::mulmod(z.unit_ % modulus, detail::ipow(p, shift), modulus);
    };
    std::int64_t s = (shifted(x) + shifted(y)) % modulus;
    if (s == 0) {
      if (x.valuation_ == y.valuation_ && x.precision_ == y.precision_) {
        return PAdicNumber(p, std::max(x.precision_, y.precision_));
      }
      throw PrecisionError("p-adic addition cancelled every known digit");
    }
    int k = 0;
    while (s % p == 0) {
      s /= p;
      ++k;
    }
    PAdicNumber out(p, relative - k);
    out.zero_ = false;
    out.valuation_ = m + k;
    out.unit_ = s;
    return out;
  }

  friend PAdicNumber operator-(const PAdicNumber& x, const PAdicNumber& y) { return x + (-y); }

  friend PAdicNumber operator*(const PAdicNumber& x, const PAdicNumber& y) {
    x.require_same_field(y);
    const int precision = std::min(x.precision_, y.precision_);
    if (x.zero_ || y.zero_) return PAdicNumber(x.prime_, precision);
    const std::int64_t modulus = detail::ipow(x.prime_, precision);
    PAdicNumber out(x.prime_, precision);
    out.zero_ = false;
    out.valuation_ = x.valuation_ + y.valuation_;
    out.unit_ = detail::mulmod(x.unit_ % modulus, y.unit_ % modulus, modulus);
    return out;
  }

  PAdicNumber inverse() const {
    if (zero_) throw DomainError("inverse of zero in Q_" + std::to_string(prime_));
    PAdicNumber out = *this;
    out.valuation_ = -valuation_;
    out.unit_ = detail::invmod(unit_, detail::ipow(prime_, precision_));
    return out;
  }

  friend PAdicNumber operator/(const PAdicNumber& x, const PAdicNumber& y) {
    return x * y.inverse();
  }

  /// |x|_p = p^(-v(x)), with |0| = 0.
  Rational norm() const {
    if (zero_) return Rational(0);
    BigInt pk = boost::multiprecision::pow(BigInt(prime_), static_cast<unsigned>(std::abs(valuation_)));
    if (valuation_ >= 0) return Rational(BigInt(1), pk);
    return Rational(pk);
  }

  /// Sum of the negative-valuation terms, as a rational in [0, 1).
  Rational fractional_part() const {
    if (zero_ || valuation_ >= 0) return Rational(0);
    const int k = -valuation_;
    if (k > precision_) {
      throw PrecisionError("fractional part needs " + std::to_string(k) +
                           " digits but only " + std::to_string(precision_) + " are known");
    }
    const std::int64_t pk = detail::ipow(prime_, k);
    return Rational(BigInt(unit_ % pk), BigInt(pk));
  }

  /**
   * Recovers a/b from the digits when |a|, |b| <= sqrt(p^precision / 2),
   * using the half extended Euclidean algorithm. Returns nullopt when no
   * such small fraction matches.
   */
  std::optional<Rational> to_rational() const {
    if (zero_) return Rational(0);
    const std::int64_t modulus = detail::ipow(prime_, precision_);
    const auto bound = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(modulus) / 2));
    std::int64_t r0 = modulus, r1 = unit_;
    std::int64_t t0 = 0, t1 = 1;
    while (r1 > bound) {
      const std::int64_t q = r0 / r1;
      std::int64_t tmp = r0 - q * r1;
      r0 = r1;
      r1 = tmp;
      tmp = t0 - q * t1;
      t0 = t1;
      t1 = tmp;
    }
    if (t1 == 0 || std::abs(t1) > bound) return std::nullopt;
    if (t1 < 0) {
      t1 = -t1;
      r1 = -r1;
    }
    const Rational unit_value{BigInt(r1), BigInt(t1)};
    if (boost::multiprecision::denominator(unit_value) % prime_ == 0 ||
        boost::multiprecision::numerator(unit_value) % prime_ == 0) {
      return std::nullopt;
    }
    BigInt pk = boost::multiprecision::pow(BigInt(prime_), static_cast<unsigned>(std::abs(valuation_)));
    if (valuation_ >= 0) return Rational(unit_value * pk);
    return Rational(unit_value / pk);
  }

  friend bool operator==(const PAdicNumber& x, const PAdicNumber& y) {
    if (x.prime_ != y.prime_ || x.zero_ != y.zero_) return false;
    if (x.zero_) return true;
    return x.valuation_ == y.valuation_ && x.precision_ == y.precision_ && x.unit_ == y.unit_;
  }

  /// Arbitrary total order for use as a map key.
  friend bool operator<(const PAdicNumber& x, const PAdicNumber& y) {
    auto key = [](const PAdicNumber& z) {
      return std::tuple(z.prime_, !z.zero_, z.zero_ ? 0 : z.valuation_, z.precision_, z.unit_);
    };
    return key(x) < key(y);
  }

  /// Equality of the common known digits (ignores precision differences).
  bool agrees_with(const PAdicNumber& other) const {
    if (prime_ != other.prime_ || zero_ != other.zero_) return false;
    if (zero_) return true;
    if (valuation_ != other.valuation_) return false;
    const std::int64_t modulus = detail::ipow(prime_, std::min(precision_, other.precision_));
    return unit_ % modulus == other.unit_ % modulus;
  }

  std::string str() const {
    if (zero_) return "0";
    if (auto r = to_rational()) return to_string(*r);
    std::string s = "p^" + std::to_string(valuation_) + "*[";
    const auto d = digits();
    for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
    return s + "]";
  }

  friend std::ostream& operator<<(std::ostream& os, const PAdicNumber& x) { return os << x.str(); }

 private:
  static void validate_parameters(int prime, int precision) {
    if (!detail::is_prime(prime)) throw UsageError(std::to_string(prime) + " is not prime");
    if (precision < 1) throw UsageError("p-adic precision must be at least 1");
    if (!detail::checked_pow(prime, precision)) {
      throw UsageError("p^precision must stay below 2^62");
    }
  }

  void require_same_field(const PAdicNumber& other) const {
    if (prime_ != other.prime_) {
      throw UsageError("mixing Q_" + std::to_string(prime_) + " and Q_" + std::to_string(other.prime_));
    }
  }

  int prime_;
  int precision_;
  bool zero_ = true;
  int valuation_ = 0;
  std::int64_t unit_ = 0;
};

/// Standard additive character x -> exp(2 pi i frac_p(x)); trivial exactly on Z_p.
inline std::complex<double> additive_character(const PAdicNumber& x) {
  if (x.is_zero() || x.valuation() >= 0) return {1.0, 0.0};
  const int k = -x.valuation();
  if (k > x.precision()) throw PrecisionError("character value needs unknown digits");
  const std::int64_t pk = detail::ipow(x.prime(), k);
  const std::int64_t r = x.unit() % pk;
  return std::polar(1.0, 2.0 * std::numbers::pi * (static_cast<double>(r) / static_cast<double>(pk)));
}

/// |x|_p as a rational; |0| = 0.
inline Rational padic_norm(const PAdicNumber& x) { return x.norm(); }

}  // namespace grwalk
