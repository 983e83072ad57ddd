#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cbundle {

// Exact rational scalar over 64-bit integers.  Every arithmetic operation is
// overflow-checked and throws std::overflow_error instead of wrapping, so a
// result that comes back is certified exact.  Kept in reduced form with a
// positive denominator.
class Rational {
public:
  Rational() : num_(0), den_(1) {}
  Rational(std::int64_t n) : num_(n), den_(1) {}
  Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { reduce(); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

  // throws std::domain_error unless the value is an integer
  std::int64_t as_integer() const;

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  Rational operator-() const;
  Rational& operator+=(const Rational& o) { *this = *this + o; return *this; }
  Rational& operator-=(const Rational& o) { *this = *this - o; return *this; }
  Rational& operator*=(const Rational& o) { *this = *this * o; return *this; }
  Rational& operator/=(const Rational& o) { *this = *this / o; return *this; }

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b);
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  std::string str() const;

private:
  void reduce();
  std::int64_t num_, den_;
};

Rational abs(const Rational& r);
Rational pow(const Rational& base, long e);

// Gaussian rational a + b*i with exact real and imaginary parts.
class GaussianRational {
public:
  GaussianRational() = default;
  GaussianRational(Rational re) : re_(re) {}
  GaussianRational(std::int64_t re) : re_(re) {}
  GaussianRational(Rational re, Rational im) : re_(re), im_(im) {}

  static GaussianRational i() { return GaussianRational(Rational(0), Rational(1)); }

  const Rational& real() const { return re_; }
  const Rational& imag() const { return im_; }

  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }

  std::complex<double> to_complex() const { return {re_.to_double(), im_.to_double()}; }

  GaussianRational conj() const { return {re_, -im_}; }
  Rational norm2() const { return re_ * re_ + im_ * im_; }

  GaussianRational operator-() const { return {-re_, -im_}; }
  GaussianRational& operator+=(const GaussianRational& o) { *this = *this + o; return *this; }
  GaussianRational& operator-=(const GaussianRational& o) { *this = *this - o; return *this; }
  GaussianRational& operator*=(const GaussianRational& o) { *this = *this * o; return *this; }
  GaussianRational& operator/=(const GaussianRational& o) { *this = *this / o; return *this; }

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re_ + b.re_, a.im_ + b.im_};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re_ - b.re_, a.im_ - b.im_};
  }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b);

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

  std::string str() const;

private:
  Rational re_, im_;
};

GaussianRational pow(const GaussianRational& base, long e);

// Parses the canonical config syntax: "1", "-2/3", "i", "-i", "3/2+1/2i",
// "1-2i", "2i".  Floating literals are rejected with a hint to use a fraction.
GaussianRational parse_gaussian_rational(const std::string& text);

using RationalMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RationalVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

// Exact Gauss-Jordan inverse; throws std::domain_error on singular input.
RationalMatrix rational_inverse(const RationalMatrix& m);
// Exact rank over Q.
int rational_rank(RationalMatrix m);

}  // namespace cbundle

namespace Eigen {
template <>
struct NumTraits<cbundle::Rational> : GenericNumTraits<cbundle::Rational> {
  using Real = cbundle::Rational;
  using NonInteger = cbundle::Rational;
  using Nested = cbundle::Rational;
  using Literal = std::int64_t;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 10,
    MulCost = 10
  };
  static inline Real epsilon() { return cbundle::Rational(0); }
  static inline Real dummy_precision() { return cbundle::Rational(0); }
  static inline int digits10() { return 0; }
};
}  // namespace Eigen
