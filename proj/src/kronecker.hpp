#pragma once

// Kronecker substitution: a Laurent polynomial is packed into one big integer
// by evaluating at x_i = 2^(w * stride_i) after shifting its exponents to be
// nonnegative. Products and exact quotients of packed integers unpack to the
// polynomial product and quotient as long as every coefficient fits in a
// w-bit slot, which lets GMP's fast integer arithmetic do the heavy lifting.

#include <optional>

#include "ptolemy/laurent.hpp"

namespace ptolemy::detail {

/// Product of two nonzero polynomials, or nullopt when the packed integers
/// would be unreasonably large (callers fall back to term-by-term products).
std::optional<LaurentPoly> kronecker_multiply(const LaurentPoly& a, const LaurentPoly& b);

enum class KroneckerDivision { quotient, not_divisible, undecided };

/// Exact division for a and b with nonnegative exponents where b has no
/// monomial factor. `undecided` means the caller must use another method.
KroneckerDivision kronecker_divide(const LaurentPoly& a, const LaurentPoly& b, LaurentPoly& quotient);

}  // namespace ptolemy::detail
