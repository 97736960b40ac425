#ifndef WTAP_RATIONAL_HPP
#define WTAP_RATIONAL_HPP

#include <gmpxx.h>

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wtap {

// Exact arithmetic everywhere in the core; GMP rationals are always kept
// canonical (gcd-reduced, positive denominator).
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Accepts "p/q", "p" and "-p/q". Throws std::invalid_argument otherwise.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational");
  Rational r;
  if (r.set_str(s, 10) != 0) {
    throw std::invalid_argument("malformed rational '" + s + "'");
  }
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline bool is_integral(const Rational& r) { return r.get_den() == 1; }

inline Rational floor_of(const Rational& r) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return Rational(q);
}

inline Rational ceil_of(const Rational& r) {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return Rational(q);
}

inline long to_long_checked(const Rational& r) {
  if (!is_integral(r) || !r.get_num().fits_slong_p()) {
    throw std::out_of_range("rational " + to_string(r) + " is not a machine integer");
  }
  return r.get_num().get_si();
}

inline Rational sum(std::span<const Rational> values) {
  Rational s = 0;
  for (const auto& v : values) s += v;
  return s;
}

}  // namespace wtap

#endif  // WTAP_RATIONAL_HPP
