#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace orbichow {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

using IntVec = std::vector<Integer>;
using RatVec = std::vector<Rational>;

enum class ErrorCode {
  InvalidInput,
  NotSemiprojective,
  NotFinite,
  NotGeneric,
  NoIntegralLift,
  MalformedTriple,
  BijectionFailed,
  VerificationFailed,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "INVALID_INPUT";
    case ErrorCode::NotSemiprojective: return "NOT_SEMIPROJECTIVE";
    case ErrorCode::NotFinite: return "NOT_FINITE";
    case ErrorCode::NotGeneric: return "NOT_GENERIC";
    case ErrorCode::NoIntegralLift: return "NO_INTEGRAL_LIFT";
    case ErrorCode::MalformedTriple: return "MALFORMED_TRIPLE";
    case ErrorCode::BijectionFailed: return "BIJECTION_FAILED";
    case ErrorCode::VerificationFailed: return "VERIFICATION_FAILED";
  }
  return "UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline Integer numer(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denom(const Rational& q) { return boost::multiprecision::denominator(q); }

inline bool is_integral(const Rational& q) { return denom(q) == 1; }

// Floor division; gmp truncates toward zero.
inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  Integer r = a - q * b;
  if (r != 0 && ((r < 0) != (b < 0))) q -= 1;
  return q;
}

inline Integer mod_floor(const Integer& a, const Integer& b) {
  return a - floor_div(a, b) * b;
}

inline Integer floor(const Rational& q) { return floor_div(numer(q), denom(q)); }
inline Integer ceil(const Rational& q) { return -floor_div(-numer(q), denom(q)); }
inline Rational frac(const Rational& q) { return q - Rational(floor(q)); }

inline Integer gcd(Integer a, Integer b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Integer t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline Integer lcm(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  Integer g = gcd(a, b);
  Integer r = a / g * b;
  return r < 0 ? Integer(-r) : r;
}

inline bool fits_int64(const Integer& z) { return mpz_fits_slong_p(z.backend().data()) != 0; }

inline std::int64_t to_int64(const Integer& z) {
  if (!fits_int64(z)) throw Error(ErrorCode::InvalidInput, "integer does not fit in 64 bits: " + z.str());
  return mpz_get_si(z.backend().data());
}

// Canonical "p/q" text; integers print without a denominator.
inline std::string to_string(const Rational& q) {
  if (denom(q) == 1) return numer(q).str();
  return numer(q).str() + "/" + denom(q).str();
}

inline Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string_view::npos) return Rational(Integer(std::string(text)));
    Integer p(std::string(text.substr(0, slash)));
    Integer q(std::string(text.substr(slash + 1)));
    if (q == 0) throw Error(ErrorCode::InvalidInput, "zero denominator in '" + std::string(text) + "'");
    return Rational(p, q);
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const Error*>(&e)) throw;
    throw Error(ErrorCode::InvalidInput, "malformed rational '" + std::string(text) + "'");
  }
}

inline RatVec to_rational(const IntVec& v) {
  RatVec out;
  out.reserve(v.size());
  for (const auto& x : v) out.emplace_back(x);
  return out;
}

inline IntVec add(const IntVec& a, const IntVec& b) {
  IntVec out(a);
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

inline IntVec sub(const IntVec& a, const IntVec& b) {
  IntVec out(a);
  for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  return out;
}

inline IntVec scale(const IntVec& a, const Integer& k) {
  IntVec out(a);
  for (auto& x : out) x *= k;
  return out;
}

inline bool is_zero(const IntVec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

inline bool is_zero(const RatVec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

}  // namespace orbichow
