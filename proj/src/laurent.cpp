#include "ptolemy/laurent.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <functional>
#include <map>
#include <numeric>
#include <unordered_map>

#include "kronecker.hpp"
#include "ptolemy/errors.hpp"

namespace ptolemy {

namespace {

void require_same_dimension(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.generator_count() != b.generator_count()) {
    throw DimensionError("Laurent polynomials over " + std::to_string(a.generator_count()) +
                         " and " + std::to_string(b.generator_count()) + " generators");
  }
}

// Descending lexicographic order on exponent vectors: the canonical term order.
struct DescendingMonomial {
  bool operator()(const Monomial& a, const Monomial& b) const { return b < a; }
};

void sort_terms(std::vector<LaurentPoly::Term>& terms) {
  std::sort(terms.begin(), terms.end(),
            [](const LaurentPoly::Term& a, const LaurentPoly::Term& b) { return b.first < a.first; });
}

// Below this many term pairs, term-by-term arithmetic beats packing.
constexpr std::size_t kronecker_threshold = 4096;

// Exponent vectors inside a fixed box packed into one 64-bit key: field i
// holds e_i - lo_i, with x1 in the most significant field, so keys compare
// like the monomials they encode and adding keys multiplies monomials as
// long as no field overflows.
struct KeyLayout {
  std::vector<int> lo;
  std::vector<int> hi;
  std::vector<unsigned> shift;

  // nullopt when the box needs more than 64 bits.
  static std::optional<KeyLayout> for_box(std::vector<int> lo, std::vector<int> hi) {
    KeyLayout k{std::move(lo), std::move(hi), {}};
    const std::size_t n = k.lo.size();
    k.shift.assign(n, 0);
    unsigned used = 0;
    for (std::size_t i = n; i-- > 0;) {
      k.shift[i] = used;
      used += std::max(1U, static_cast<unsigned>(std::bit_width(static_cast<unsigned>(k.hi[i] - k.lo[i]))));
      if (used > 64) return std::nullopt;
    }
    return k;
  }

  std::uint64_t field(std::uint64_t key, std::size_t i) const {
    const unsigned width = (i == 0 ? 64 : shift[i - 1]) - shift[i];
    const std::uint64_t mask = width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
    return (key >> shift[i]) & mask;
  }

  // Encodes m relative to `base` (defaults to lo).
  std::uint64_t encode(const Monomial& m, std::span<const int> base) const {
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < lo.size(); ++i) key |= static_cast<std::uint64_t>(m[i] - base[i]) << shift[i];
    return key;
  }

  Monomial decode(std::uint64_t key) const {
    std::vector<int> e(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i) e[i] = lo[i] + static_cast<int>(field(key, i));
    return Monomial(std::move(e));
  }
};

std::pair<std::vector<int>, std::vector<int>> exponent_box(const LaurentPoly& p) {
  const std::size_t n = p.generator_count();
  std::vector<int> lo(n, 0), hi(n, 0);
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = first ? m[i] : std::min(lo[i], m[i]);
      hi[i] = first ? m[i] : std::max(hi[i], m[i]);
    }
    first = false;
  }
  return {std::move(lo), std::move(hi)};
}

bool is_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

std::string to_string(const Integer& v) { return v.get_str(); }

std::string to_string(const Rational& v) {
  if (v.get_den() == 1) return v.get_num().get_str();
  return v.get_num().get_str() + "/" + v.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!is_digits(num) || !is_digits(den)) {
    throw FormatError("malformed rational '" + std::string(text) + "'");
  }
  Integer n{std::string(num)}, d{std::string(den)};
  if (d == 0) throw FormatError("zero denominator in '" + std::string(text) + "'");
  Rational r(negative ? Integer(-n) : n, d);
  r.canonicalize();
  return r;
}

// --- Monomial ---------------------------------------------------------------

Monomial Monomial::generator(std::size_t n, std::size_t i, int power) {
  std::vector<int> e(n, 0);
  e.at(i) = power;
  return Monomial(std::move(e));
}

bool Monomial::is_one() const {
  return std::all_of(exps_.begin(), exps_.end(), [](int e) { return e == 0; });
}

Monomial Monomial::operator*(const Monomial& other) const {
  std::vector<int> e(exps_);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] += other.exps_[i];
  return Monomial(std::move(e));
}

Monomial Monomial::operator/(const Monomial& other) const {
  std::vector<int> e(exps_);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] -= other.exps_[i];
  return Monomial(std::move(e));
}

bool Monomial::divisible_by(const Monomial& other) const {
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    if (exps_[i] < other.exps_[i]) return false;
  }
  return true;
}

std::size_t MonomialHash::operator()(const Monomial& m) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (int e : m.exponents()) {
    h ^= static_cast<std::size_t>(static_cast<unsigned>(e)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

// --- LaurentPoly ------------------------------------------------------------

LaurentPoly LaurentPoly::constant(std::size_t n, const Integer& c) {
  return monomial(Monomial(n), c);
}

LaurentPoly LaurentPoly::generator(std::size_t n, std::size_t i) {
  return monomial(Monomial::generator(n, i));
}

LaurentPoly LaurentPoly::monomial(const Monomial& m, const Integer& c) {
  LaurentPoly p(m.size());
  if (c != 0) p.terms_.emplace_back(m, c);
  return p;
}

LaurentPoly LaurentPoly::from_terms(std::size_t n, std::vector<Term> terms) {
  LaurentPoly p(n);
  for (const auto& [m, c] : terms) {
    if (m.size() != n) throw DimensionError("monomial length does not match generator count");
  }
  sort_terms(terms);
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().first == t.first) {
      p.terms_.back().second += t.second;
    } else {
      if (!p.terms_.empty() && p.terms_.back().second == 0) p.terms_.pop_back();
      p.terms_.push_back(std::move(t));
    }
  }
  if (!p.terms_.empty() && p.terms_.back().second == 0) p.terms_.pop_back();
  return p;
}

Monomial LaurentPoly::min_exponents() const {
  if (terms_.empty()) return Monomial(n_);
  std::vector<int> e(terms_.front().first.exponents().begin(), terms_.front().first.exponents().end());
  for (const auto& [m, c] : terms_) {
    for (std::size_t i = 0; i < n_; ++i) e[i] = std::min(e[i], m[i]);
  }
  return Monomial(std::move(e));
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r(*this);
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
  require_same_dimension(a, b);
  LaurentPoly r(a.n_);
  r.terms_.reserve(a.terms_.size() + b.terms_.size());
  auto i = a.terms_.begin(), j = b.terms_.begin();
  while (i != a.terms_.end() || j != b.terms_.end()) {
    if (j == b.terms_.end() || (i != a.terms_.end() && j->first < i->first)) {
      r.terms_.push_back(*i++);
    } else if (i == a.terms_.end() || i->first < j->first) {
      r.terms_.push_back(*j++);
    } else {
      Integer c = i->second + j->second;
      if (c != 0) r.terms_.emplace_back(i->first, std::move(c));
      ++i;
      ++j;
    }
  }
  return r;
}

LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return a + (-b); }

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  require_same_dimension(a, b);
  if (a.is_zero() || b.is_zero()) return LaurentPoly(a.n_);
  if (a.is_monomial() || b.is_monomial()) {
    const LaurentPoly& mono = a.is_monomial() ? a : b;
    const LaurentPoly& other = a.is_monomial() ? b : a;
    LaurentPoly r(a.n_);
    r.terms_.reserve(other.terms_.size());
    for (const auto& [m, c] : other.terms_) {
      r.terms_.emplace_back(m * mono.terms_[0].first, Integer(c * mono.terms_[0].second));
    }
    return r;
  }
  if (a.terms_.size() * b.terms_.size() >= kronecker_threshold) {
    if (auto p = detail::kronecker_multiply(a, b)) return std::move(*p);
  }
  const std::size_t n = a.n_;
  auto [alo, ahi] = exponent_box(a);
  auto [blo, bhi] = exponent_box(b);
  std::vector<int> lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = alo[i] + blo[i];
    hi[i] = ahi[i] + bhi[i];
  }
  if (auto layout = KeyLayout::for_box(std::move(lo), std::move(hi))) {
    std::vector<std::uint64_t> bkeys;
    bkeys.reserve(b.terms_.size());
    for (const auto& [mb, cb] : b.terms_) bkeys.push_back(layout->encode(mb, blo));
    std::unordered_map<std::uint64_t, std::size_t> slot;
    slot.reserve(std::min(a.terms_.size() * b.terms_.size(), std::size_t{1} << 24));
    std::vector<std::pair<std::uint64_t, Integer>> acc;
    for (const auto& [ma, ca] : a.terms_) {
      const std::uint64_t ka = layout->encode(ma, alo);
      for (std::size_t j = 0; j < bkeys.size(); ++j) {
        auto [it, inserted] = slot.try_emplace(ka + bkeys[j], acc.size());
        if (inserted) acc.emplace_back(ka + bkeys[j], 0);
        mpz_addmul(acc[it->second].second.get_mpz_t(), ca.get_mpz_t(), b.terms_[j].second.get_mpz_t());
      }
    }
    std::sort(acc.begin(), acc.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
    LaurentPoly r(n);
    r.terms_.reserve(acc.size());
    for (auto& [key, c] : acc) {
      if (c != 0) r.terms_.emplace_back(layout->decode(key), std::move(c));
    }
    return r;
  }
  std::unordered_map<Monomial, Integer, MonomialHash> acc;
  acc.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      auto [it, inserted] = acc.try_emplace(ma * mb);
      mpz_addmul(it->second.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
    }
  }
  LaurentPoly r(n);
  r.terms_.reserve(acc.size());
  for (auto& [m, c] : acc) {
    if (c != 0) r.terms_.emplace_back(m, std::move(c));
  }
  sort_terms(r.terms_);
  return r;
}

LaurentPoly LaurentPoly::pow(unsigned exponent) const {
  LaurentPoly result = constant(n_, 1);
  LaurentPoly base = *this;
  while (exponent > 0) {
    if (exponent & 1U) result = result * base;
    exponent >>= 1U;
    if (exponent > 0) base = base * base;
  }
  return result;
}

LaurentPoly LaurentPoly::shifted(const Monomial& m) const {
  LaurentPoly r(*this);
  for (auto& t : r.terms_) t.first = t.first * m;
  return r;
}

bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
  return a.n_ == b.n_ && a.terms_ == b.terms_;
}

std::strong_ordering operator<=>(const LaurentPoly& a, const LaurentPoly& b) {
  if (auto c = a.n_ <=> b.n_; c != 0) return c;
  const std::size_t common = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < common; ++i) {
    const auto& [ma, ca] = a.terms_[i];
    const auto& [mb, cb] = b.terms_[i];
    if (auto c = ma <=> mb; c != 0) return c;
    int s = cmp(ca, cb);
    if (s != 0) return s < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return a.terms_.size() <=> b.terms_.size();
}

// --- Exact division -----------------------------------------------------------

std::optional<LaurentPoly> div_exact(const LaurentPoly& a, const LaurentPoly& b) {
  require_same_dimension(a, b);
  if (b.is_zero()) throw DivisionByZero("exact division by the zero polynomial");
  const std::size_t n = a.generator_count();
  if (a.is_zero()) return LaurentPoly(n);

  if (b.is_monomial()) {
    const auto& [bm, bc] = b.terms()[0];
    std::vector<LaurentPoly::Term> q;
    q.reserve(a.size());
    for (const auto& [m, c] : a.terms()) {
      if (!mpz_divisible_p(c.get_mpz_t(), bc.get_mpz_t())) return std::nullopt;
      Integer qc;
      mpz_divexact(qc.get_mpz_t(), c.get_mpz_t(), bc.get_mpz_t());
      q.emplace_back(m / bm, std::move(qc));
    }
    return LaurentPoly::from_terms(n, std::move(q));
  }

  // Strip the monomial content of both sides. What remains of b has no
  // monomial factor, so it divides a Laurent polynomial iff it divides the
  // polynomial part of a in Z[x]; run leading-term elimination there.
  const Monomial a_shift = a.min_exponents();
  const Monomial b_shift = b.min_exponents();
  const LaurentPoly divisor = b.shifted(Monomial(n) / b_shift);
  const auto& [lead_m, lead_c] = divisor.terms().front();

  if (a.size() * divisor.size() >= kronecker_threshold) {
    LaurentPoly q(n);
    switch (detail::kronecker_divide(a.shifted(Monomial(n) / a_shift), divisor, q)) {
      case detail::KroneckerDivision::quotient:
        return q.shifted(a_shift / b_shift);
      case detail::KroneckerDivision::not_divisible:
        return std::nullopt;
      case detail::KroneckerDivision::undecided:
        break;
    }
  }

  // Exact quotients satisfy max(q) = max(a) - max(b) in every coordinate, so
  // every quotient term and every remainder term stays inside a's box.
  const Monomial a_top = Monomial(exponent_box(a).second) / a_shift;
  const Monomial b_top(exponent_box(divisor).second);
  if (!a_top.divisible_by(b_top)) return std::nullopt;
  if (auto layout = KeyLayout::for_box(std::vector<int>(n, 0), {a_top.exponents().begin(), a_top.exponents().end()})) {
    const std::vector<int> zero(n, 0);
    const std::uint64_t lead_key = layout->encode(lead_m, zero);
    std::vector<std::uint64_t> dkeys;
    for (const auto& [dm, dc] : divisor.terms()) dkeys.push_back(layout->encode(dm, zero));
    std::map<std::uint64_t, Integer, std::greater<>> rem;
    for (const auto& [m, c] : a.terms()) rem.emplace(layout->encode(m / a_shift, zero), c);
    std::vector<LaurentPoly::Term> quotient;
    while (!rem.empty()) {
      auto top = rem.begin();
      for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t t = layout->field(top->first, i), l = layout->field(lead_key, i);
        if (t < l || t - l > static_cast<std::uint64_t>(a_top[i] - b_top[i])) return std::nullopt;
      }
      if (!mpz_divisible_p(top->second.get_mpz_t(), lead_c.get_mpz_t())) return std::nullopt;
      Integer qc;
      mpz_divexact(qc.get_mpz_t(), top->second.get_mpz_t(), lead_c.get_mpz_t());
      const std::uint64_t qk = top->first - lead_key;
      for (std::size_t j = 0; j < dkeys.size(); ++j) {
        auto [it, inserted] = rem.try_emplace(qk + dkeys[j]);
        mpz_submul(it->second.get_mpz_t(), qc.get_mpz_t(), divisor.terms()[j].second.get_mpz_t());
        if (it->second == 0) rem.erase(it);
      }
      quotient.emplace_back(layout->decode(qk), std::move(qc));
    }
    LaurentPoly q = LaurentPoly::from_terms(n, std::move(quotient));
    return q.shifted(a_shift / b_shift);
  }

  std::map<Monomial, Integer, DescendingMonomial> rem;
  for (const auto& [m, c] : a.terms()) rem.emplace(m / a_shift, c);

  std::vector<LaurentPoly::Term> quotient;
  while (!rem.empty()) {
    auto top = rem.begin();
    if (!top->first.divisible_by(lead_m)) return std::nullopt;
    if (!mpz_divisible_p(top->second.get_mpz_t(), lead_c.get_mpz_t())) return std::nullopt;
    Integer qc;
    mpz_divexact(qc.get_mpz_t(), top->second.get_mpz_t(), lead_c.get_mpz_t());
    Monomial qm = top->first / lead_m;
    for (const auto& [dm, dc] : divisor.terms()) {
      auto [it, inserted] = rem.try_emplace(qm * dm);
      mpz_submul(it->second.get_mpz_t(), qc.get_mpz_t(), dc.get_mpz_t());
      if (it->second == 0) rem.erase(it);
    }
    quotient.emplace_back(std::move(qm), std::move(qc));
  }
  LaurentPoly q = LaurentPoly::from_terms(n, std::move(quotient));
  return q.shifted(a_shift / b_shift);
}

// --- Evaluation ---------------------------------------------------------------

Rational evaluate(const LaurentPoly& p, std::span<const Rational> point) {
  if (point.size() != p.generator_count()) {
    throw DimensionError("evaluation point has " + std::to_string(point.size()) + " coordinates, expected " +
                         std::to_string(p.generator_count()));
  }
  for (std::size_t i = 0; i < point.size(); ++i) {
    if (point[i] == 0) throw EvaluationError("coordinate x" + std::to_string(i + 1) + " is zero");
  }
  Rational total = 0;
  for (const auto& [m, c] : p.terms()) {
    Integer num = c, den = 1;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const int e = m[i];
      if (e == 0) continue;
      Integer pn, pd;
      const unsigned k = static_cast<unsigned>(e < 0 ? -e : e);
      mpz_pow_ui(pn.get_mpz_t(), point[i].get_num_mpz_t(), k);
      mpz_pow_ui(pd.get_mpz_t(), point[i].get_den_mpz_t(), k);
      if (e > 0) {
        num *= pn;
        den *= pd;
      } else {
        num *= pd;
        den *= pn;
      }
    }
    Rational term(num, den);
    term.canonicalize();
    total += term;
  }
  return total;
}

// --- Text format --------------------------------------------------------------

std::string to_string(const LaurentPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    const bool negative = c < 0;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    Integer mag = abs(c);
    if (m.is_one()) {
      out += mag.get_str();
      continue;
    }
    if (mag != 1) out += mag.get_str() + "*";
    bool first_factor = true;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (!first_factor) out += "*";
      first_factor = false;
      out += "x" + std::to_string(i + 1);
      if (m[i] != 1) out += "^" + std::to_string(m[i]);
    }
  }
  return out;
}

namespace {

class LaurentParser {
 public:
  LaurentParser(std::string_view text, std::size_t n) : text_(text), n_(n) {}

  LaurentPoly parse() {
    std::vector<LaurentPoly::Term> terms;
    skip_space();
    bool negative = false;
    if (peek() == '-') {
      negative = true;
      ++pos_;
    }
    terms.push_back(term(negative));
    skip_space();
    while (pos_ < text_.size()) {
      char op = text_[pos_];
      if (op != '+' && op != '-') fail("expected '+' or '-'");
      ++pos_;
      terms.push_back(term(op == '-'));
      skip_space();
    }
    return LaurentPoly::from_terms(n_, std::move(terms));
  }

 private:
  LaurentPoly::Term term(bool negative) {
    skip_space();
    Integer coeff = 1;
    std::vector<int> exps(n_, 0);
    bool have_factor = false;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      coeff = Integer(digits());
      skip_space();
      if (peek() != '*') return {Monomial(std::move(exps)), negative ? Integer(-coeff) : coeff};
      ++pos_;
      skip_space();
    }
    for (;;) {
      factor(exps);
      have_factor = true;
      skip_space();
      if (peek() != '*') break;
      ++pos_;
      skip_space();
    }
    if (!have_factor) fail("empty term");
    return {Monomial(std::move(exps)), negative ? Integer(-coeff) : coeff};
  }

  void factor(std::vector<int>& exps) {
    if (peek() != 'x') fail("expected generator 'x<i>'");
    ++pos_;
    const std::string idx = digits();
    const unsigned long i = std::stoul(idx);
    if (i < 1 || i > n_) fail("generator x" + idx + " out of range 1.." + std::to_string(n_));
    int e = 1;
    if (peek() == '^') {
      ++pos_;
      bool neg = false;
      if (peek() == '-') {
        neg = true;
        ++pos_;
      }
      const std::string d = digits();
      if (d.size() > 9) fail("exponent too large");
      e = std::stoi(d);
      if (neg) e = -e;
    }
    exps[i - 1] += e;
  }

  std::string digits() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits");
    return std::string(text_.substr(start, pos_ - start));
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw FormatError("cannot parse Laurent polynomial '" + std::string(text_) + "' at offset " +
                      std::to_string(pos_) + ": " + why);
  }

  std::string_view text_;
  std::size_t n_;
  std::size_t pos_ = 0;
};

}  // namespace

LaurentPoly parse_laurent(std::string_view text, std::size_t n) { return LaurentParser(text, n).parse(); }

}  // namespace ptolemy

std::size_t std::hash<ptolemy::LaurentPoly>::operator()(const ptolemy::LaurentPoly& p) const noexcept {
  std::size_t h = p.generator_count();
  ptolemy::MonomialHash mh;
  for (const auto& [m, c] : p.terms()) {
    h ^= mh(m) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= static_cast<std::size_t>(mpz_get_si(c.get_mpz_t())) + (h << 6) + (h >> 2);
  }
  return h;
}
