#include "cbundle/rational.hpp"

#include <cctype>

namespace cbundle {

namespace {

constexpr std::int64_t kMax = INT64_MAX;
constexpr std::int64_t kMin = INT64_MIN;

std::int64_t narrow(__int128 v) {
  if (v > static_cast<__int128>(kMax) || v < static_cast<__int128>(kMin))
    throw std::overflow_error("rational arithmetic overflow");
  return static_cast<std::int64_t>(v);
}

std::int64_t cmul(std::int64_t a, std::int64_t b) {
  return narrow(static_cast<__int128>(a) * b);
}

std::int64_t cadd(std::int64_t a, std::int64_t b) {
  return narrow(static_cast<__int128>(a) + b);
}

}  // namespace

void Rational::reduce() {
  if (den_ == 0) throw std::domain_error("rational with zero denominator");
  if (den_ < 0) {
    num_ = narrow(-static_cast<__int128>(num_));
    den_ = narrow(-static_cast<__int128>(den_));
  }
  std::int64_t g = std::gcd(num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

std::int64_t Rational::as_integer() const {
  if (den_ != 1) throw std::domain_error("rational " + str() + " is not an integer");
  return num_;
}

Rational Rational::operator-() const {
  Rational r;
  r.num_ = narrow(-static_cast<__int128>(num_));
  r.den_ = den_;
  return r;
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational(cadd(cmul(a.num_, b.den_), cmul(b.num_, a.den_)), cmul(a.den_, b.den_));
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return Rational(cmul(a.num_, b.num_), cmul(a.den_, b.den_));
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("rational division by zero");
  return Rational(cmul(a.num_, b.den_), cmul(a.den_, b.num_));
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
}

std::string Rational::str() const {
  std::string s = std::to_string(num_);
  if (den_ != 1) s += "/" + std::to_string(den_);
  return s;
}

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

Rational pow(const Rational& base, long e) {
  if (e < 0) return Rational(1) / pow(base, -e);
  Rational acc(1), m = base;
  for (; e > 0; e >>= 1) {
    if (e & 1) acc *= m;
    m *= m;
  }
  return acc;
}

GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
  Rational n2 = b.norm2();
  if (n2.is_zero()) throw std::domain_error("gaussian rational division by zero");
  GaussianRational t = a * b.conj();
  return {t.real() / n2, t.imag() / n2};
}

GaussianRational pow(const GaussianRational& base, long e) {
  if (e < 0) return GaussianRational(Rational(1)) / pow(base, -e);
  GaussianRational acc{Rational(1)}, m = base;
  for (; e > 0; e >>= 1) {
    if (e & 1) acc *= m;
    m *= m;
  }
  return acc;
}

namespace {

std::string imag_str(const Rational& r) {
  if (r == Rational(1)) return "i";
  if (r == Rational(-1)) return "-i";
  return r.str() + "i";
}

struct Cursor {
  const std::string& s;
  std::size_t pos = 0;
  bool done() const { return pos >= s.size(); }
  char peek() const { return done() ? '\0' : s[pos]; }
};

[[noreturn]] void bad(const std::string& text, const std::string& why) {
  throw std::invalid_argument("cannot parse \"" + text + "\" as a gaussian rational: " + why);
}

// SIGN? DIGITS ('/' DIGITS)?  -- also allows a bare sign before 'i'
Rational parse_rational_part(Cursor& c, const std::string& text, bool* bare_unit) {
  int sign = 1;
  if (c.peek() == '+' || c.peek() == '-') {
    if (c.s[c.pos] == '-') sign = -1;
    ++c.pos;
  }
  if (bare_unit && c.peek() == 'i') {
    *bare_unit = true;
    return Rational(sign);
  }
  if (!std::isdigit(static_cast<unsigned char>(c.peek()))) bad(text, "digit expected");
  auto read_int = [&]() {
    std::int64_t v = 0;
    std::size_t n = 0;
    while (std::isdigit(static_cast<unsigned char>(c.peek()))) {
      v = v * 10 + (c.s[c.pos] - '0');
      if (v < 0) bad(text, "integer literal too large");
      ++c.pos;
      ++n;
    }
    if (n == 0) bad(text, "digit expected");
    return v;
  };
  std::int64_t num = read_int();
  if (c.peek() == '.' || c.peek() == 'e' || c.peek() == 'E')
    bad(text, "floating literals are not exact; write a fraction such as 3/2");
  std::int64_t den = 1;
  if (c.peek() == '/') {
    ++c.pos;
    den = read_int();
  }
  return Rational(sign * num, den);
}

}  // namespace

std::string GaussianRational::str() const {
  if (im_.is_zero()) return re_.str();
  if (re_.is_zero()) return imag_str(im_);
  return re_.str() + (im_.sign() > 0 ? "+" : "-") + imag_str(abs(im_));
}

GaussianRational parse_gaussian_rational(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw std::invalid_argument("empty gaussian rational literal");
  Cursor c{s};
  bool bare = false;
  Rational first = parse_rational_part(c, text, &bare);
  if (c.peek() == 'i') {
    ++c.pos;
    if (!c.done()) bad(text, "trailing characters");
    return {Rational(0), first};
  }
  if (bare) bad(text, "malformed imaginary part");
  if (c.done()) return {first, Rational(0)};
  if (c.peek() != '+' && c.peek() != '-') bad(text, "'+' or '-' expected before imaginary part");
  bool bare2 = false;
  Rational second = parse_rational_part(c, text, &bare2);
  if (c.peek() != 'i') bad(text, "imaginary part must end in 'i'");
  ++c.pos;
  if (!c.done()) bad(text, "trailing characters");
  return {first, second};
}

RationalMatrix rational_inverse(const RationalMatrix& m) {
  const int n = static_cast<int>(m.rows());
  if (m.cols() != n) throw std::domain_error("rational_inverse: square matrix required");
  RationalMatrix a = m;
  RationalMatrix inv = RationalMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) inv(i, i) = Rational(1);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r)
      if (!a(r, col).is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) throw std::domain_error("rational_inverse: singular matrix");
    a.row(col).swap(a.row(pivot));
    inv.row(col).swap(inv.row(pivot));
    Rational p = a(col, col);
    for (int j = 0; j < n; ++j) {
      a(col, j) /= p;
      inv(col, j) /= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || a(r, col).is_zero()) continue;
      Rational f = a(r, col);
      for (int j = 0; j < n; ++j) {
        a(r, j) -= f * a(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

int rational_rank(RationalMatrix m) {
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r)
      if (!m(r, col).is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    m.row(rank).swap(m.row(pivot));
    Rational p = m(rank, col);
    for (int r = rank + 1; r < rows; ++r) {
      if (m(r, col).is_zero()) continue;
      Rational f = m(r, col) / p;
      for (int j = col; j < cols; ++j) m(r, j) -= f * m(rank, j);
    }
    ++rank;
  }
  return rank;
}

}  // namespace cbundle
