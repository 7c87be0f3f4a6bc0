#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace hptbv {

// Exact rational; mpq_class keeps num/den canonical after every field operation.
using Scalar = mpq_class;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MathError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parses "p/q" or "p" (decimal integers, optional sign). Throws InputError.
Scalar parse_scalar(const std::string& text);

/// "p/q", or "p" when the denominator is 1.
std::string format_scalar(const Scalar& s);

inline bool is_zero(const Scalar& s) { return sgn(s) == 0; }

/// |numerator| as a Scalar, used for "largest coefficient" reporting.
inline Scalar abs_numerator(const Scalar& s) {
    mpz_class n = s.get_num();
    if (n < 0) n = -n;
    return Scalar(n);
}

}  // namespace hptbv
