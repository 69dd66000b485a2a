#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace corelect {

using Int = mpz_class;
using Rat = mpq_class;

inline Int floor_rat(const Rat& q) {
  Int r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Int ceil_rat(const Rat& q) {
  Int r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

inline long to_long(const Int& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("integer too large: " + z.get_str());
  return z.get_si();
}

/// Parses "p/q", "-3", or a decimal string like "1.25" into an exact rational.
Rat parse_rat(const std::string& s);

/// Renders as "p" when integral, else "p/q".
std::string rat_str(const Rat& q);

}  // namespace corelect
