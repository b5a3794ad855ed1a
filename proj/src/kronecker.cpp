#include "kronecker.hpp"

#include <gmp.h>

#include <algorithm>
#include <cstdint>
#include <vector>

namespace ptolemy::detail {

namespace {

static_assert(GMP_NUMB_BITS == 64, "packing assumes 64-bit limbs without nails");

// Largest packed integer we are willing to build, in bits.
constexpr std::uint64_t max_packed_bits = std::uint64_t{1} << 31;

struct Packing {
  std::vector<int> shift;             // subtracted from exponents before packing
  std::vector<std::uint64_t> radix;   // exponent range per generator
  std::uint64_t slots = 1;
  std::uint64_t width = 0;            // bits per slot, sign included

  std::uint64_t index(const Monomial& m) const {
    // x1 is the most significant digit, so descending slot index is the
    // canonical descending lexicographic term order.
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < radix.size(); ++i) idx = idx * radix[i] + static_cast<std::uint64_t>(m[i] - shift[i]);
    return idx;
  }

  Monomial monomial(std::uint64_t idx) const {
    std::vector<int> e(radix.size());
    for (std::size_t i = radix.size(); i-- > 0;) {
      e[i] = static_cast<int>(idx % radix[i]) + shift[i];
      idx /= radix[i];
    }
    return Monomial(std::move(e));
  }
};

std::uint64_t bit_length(const Integer& v) { return v == 0 ? 0 : mpz_sizeinbase(v.get_mpz_t(), 2); }

std::uint64_t max_coefficient_bits(const LaurentPoly& p) {
  std::uint64_t bits = 0;
  for (const auto& [m, c] : p.terms()) bits = std::max(bits, bit_length(c));
  return bits;
}

std::uint64_t bits_of(std::uint64_t v) {
  std::uint64_t b = 0;
  while (v) {
    ++b;
    v >>= 1;
  }
  return b;
}

// Computes slots; false when the packing is too large, or when its size in
// limbs exceeds `max_limbs` (the estimated cost of working term by term).
bool finish(Packing& k, std::uint64_t max_limbs) {
  k.slots = 1;
  for (auto r : k.radix) {
    if (r == 0 || k.slots > max_packed_bits / r) return false;
    k.slots *= r;
  }
  return k.width != 0 && k.slots <= max_packed_bits / k.width && k.slots * k.width / 64 <= max_limbs;
}

void or_bits(std::vector<mp_limb_t>& out, std::uint64_t pos, const mp_limb_t* src, std::size_t count) {
  const std::size_t limb = pos / 64;
  const unsigned shift = pos % 64;
  for (std::size_t j = 0; j < count; ++j) {
    out[limb + j] |= src[j] << shift;
    if (shift) out[limb + j + 1] |= src[j] >> (64 - shift);
  }
}

void import_limbs(Integer& z, const std::vector<mp_limb_t>& limbs) {
  std::size_t n = limbs.size();
  while (n > 0 && limbs[n - 1] == 0) --n;
  mp_limb_t* dst = mpz_limbs_write(z.get_mpz_t(), std::max<std::size_t>(n, 1));
  std::copy(limbs.begin(), limbs.begin() + n, dst);
  mpz_limbs_finish(z.get_mpz_t(), static_cast<mp_size_t>(n));
}

std::size_t limb_count(const Packing& k) { return (k.slots * k.width) / 64 + 2; }

Integer pack(const LaurentPoly& p, const Packing& k) {
  std::vector<mp_limb_t> pos(limb_count(k), 0), neg(limb_count(k), 0);
  bool any_neg = false;
  for (const auto& [m, c] : p.terms()) {
    const mpz_srcptr z = c.get_mpz_t();
    auto& dst = mpz_sgn(z) < 0 ? neg : pos;
    any_neg = any_neg || mpz_sgn(z) < 0;
    or_bits(dst, k.index(m) * k.width, mpz_limbs_read(z), mpz_size(z));
  }
  Integer out;
  import_limbs(out, pos);
  if (any_neg) {
    Integer n;
    import_limbs(n, neg);
    out -= n;
  }
  return out;
}

// Bit pattern with bit (w - 1) set in every slot.
Integer slot_offsets(const Packing& k) {
  std::vector<mp_limb_t> limbs(limb_count(k), 0);
  for (std::uint64_t idx = 0; idx < k.slots; ++idx) {
    const std::uint64_t bit = idx * k.width + k.width - 1;
    limbs[bit / 64] |= mp_limb_t{1} << (bit % 64);
  }
  Integer out;
  import_limbs(out, limbs);
  return out;
}

// Reads signed slots; nullopt when z does not fit the packing.
std::optional<LaurentPoly> unpack(const Integer& z, const Packing& k, std::size_t n) {
  const Integer y = z + slot_offsets(k);
  if (y < 0 || bit_length(y) > k.slots * k.width) return std::nullopt;
  std::vector<mp_limb_t> limbs(limb_count(k) + 1, 0);
  {
    const mpz_srcptr yz = y.get_mpz_t();
    std::copy(mpz_limbs_read(yz), mpz_limbs_read(yz) + mpz_size(yz), limbs.begin());
  }
  const std::size_t digit_limbs = (k.width + 63) / 64;
  std::vector<mp_limb_t> digit(digit_limbs);
  std::vector<LaurentPoly::Term> terms;
  const std::uint64_t top = k.width - 1;  // bit holding the offset
  for (std::uint64_t idx = k.slots; idx-- > 0;) {
    const std::uint64_t pos = idx * k.width;
    const std::size_t limb = pos / 64;
    const unsigned shift = pos % 64;
    bool zero_below_top = true;
    for (std::size_t j = 0; j < digit_limbs; ++j) {
      mp_limb_t v = limbs[limb + j] >> shift;
      if (shift) v |= limbs[limb + j + 1] << (64 - shift);
      digit[j] = v;
    }
    const unsigned rem = k.width % 64;
    if (rem) digit[digit_limbs - 1] &= (mp_limb_t{1} << rem) - 1;
    const bool offset_bit = (digit[top / 64] >> (top % 64)) & 1;
    digit[top / 64] &= ~(mp_limb_t{1} << (top % 64));
    for (auto v : digit) zero_below_top = zero_below_top && v == 0;
    if (offset_bit && zero_below_top) continue;  // coefficient 0

    Integer c;
    std::size_t used = digit_limbs;
    while (used > 0 && digit[used - 1] == 0) --used;
    mp_limb_t* dst = mpz_limbs_write(c.get_mpz_t(), std::max<std::size_t>(used, 1));
    std::copy(digit.begin(), digit.begin() + used, dst);
    mpz_limbs_finish(c.get_mpz_t(), static_cast<mp_size_t>(used));
    if (!offset_bit) {
      // value = digit - 2^(w-1) < 0
      Integer half;
      mpz_setbit(half.get_mpz_t(), top);
      c -= half;
    }
    terms.emplace_back(k.monomial(idx), std::move(c));
  }
  return LaurentPoly::from_terms(n, std::move(terms));
}

struct ExponentRange {
  std::vector<int> lo, hi;
};

ExponentRange exponent_range(const LaurentPoly& p) {
  const std::size_t n = p.generator_count();
  ExponentRange r{std::vector<int>(n), std::vector<int>(n)};
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    for (std::size_t i = 0; i < n; ++i) {
      r.lo[i] = first ? m[i] : std::min(r.lo[i], m[i]);
      r.hi[i] = first ? m[i] : std::max(r.hi[i], m[i]);
    }
    first = false;
  }
  return r;
}

}  // namespace

std::optional<LaurentPoly> kronecker_multiply(const LaurentPoly& a, const LaurentPoly& b) {
  const std::size_t n = a.generator_count();
  const ExponentRange ra = exponent_range(a), rb = exponent_range(b);
  Packing ka, kb, kp;
  for (std::size_t i = 0; i < n; ++i) {
    const auto span = static_cast<std::uint64_t>(ra.hi[i] - ra.lo[i]) + static_cast<std::uint64_t>(rb.hi[i] - rb.lo[i]) + 1;
    ka.shift.push_back(ra.lo[i]);
    kb.shift.push_back(rb.lo[i]);
    kp.shift.push_back(ra.lo[i] + rb.lo[i]);
    ka.radix.push_back(span);
    kb.radix.push_back(span);
    kp.radix.push_back(span);
  }
  // |product coefficient| <= min(#a, #b) * max|a| * max|b|
  const std::uint64_t width = max_coefficient_bits(a) + max_coefficient_bits(b) +
                              bits_of(std::min(a.size(), b.size())) + 2;
  ka.width = kb.width = kp.width = width;
  const std::uint64_t budget = 2 * static_cast<std::uint64_t>(a.size()) * b.size();
  if (!finish(ka, budget) || !finish(kb, budget) || !finish(kp, budget)) return std::nullopt;
  const Integer za = pack(a, ka);
  const Integer zb = pack(b, kb);
  auto product = unpack(Integer(za * zb), kp, n);
  return product;
}

KroneckerDivision kronecker_divide(const LaurentPoly& a, const LaurentPoly& b, LaurentPoly& quotient) {
  const std::size_t n = a.generator_count();
  const ExponentRange ra = exponent_range(a), rb = exponent_range(b);
  Packing k;
  // Upper bound on the quotient's size: its exponents fit in a box whose
  // sides are the differences of the degree spans.
  std::uint64_t quotient_box = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (ra.lo[i] < 0 || rb.lo[i] < 0) return KroneckerDivision::undecided;
    // Degrees add under multiplication, so a quotient needs room for them.
    if (rb.hi[i] > ra.hi[i]) return KroneckerDivision::not_divisible;
    k.shift.push_back(0);
    k.radix.push_back(static_cast<std::uint64_t>(ra.hi[i]) + 1);
    quotient_box = std::min<std::uint64_t>(quotient_box * static_cast<std::uint64_t>(ra.hi[i] - rb.hi[i] + 1), a.size());
  }
  // Heuristic slot width: the quotient's coefficients are usually no larger
  // than the dividend's (always so when everything is positive). Whatever is
  // unpacked is verified by an exact multiplication below.
  k.width = max_coefficient_bits(a) + 64;
  if (max_coefficient_bits(b) + 1 >= k.width) return KroneckerDivision::undecided;
  if (!finish(k, 4 * quotient_box * b.size())) return KroneckerDivision::undecided;
  const Integer za = pack(a, k);
  const Integer zb = pack(b, k);
  Integer zq, zr;
  mpz_tdiv_qr(zq.get_mpz_t(), zr.get_mpz_t(), za.get_mpz_t(), zb.get_mpz_t());
  // Packing is a ring homomorphism, so a polynomial quotient forces an exact
  // integer quotient.
  if (zr != 0) return KroneckerDivision::not_divisible;
  auto q = unpack(zq, k, n);
  if (!q || q->is_zero()) return KroneckerDivision::undecided;
  auto check = kronecker_multiply(*q, b);
  if (!check) check = *q * b;
  if (!(*check == a)) return KroneckerDivision::undecided;
  quotient = std::move(*q);
  return KroneckerDivision::quotient;
}

}  // namespace ptolemy::detail
