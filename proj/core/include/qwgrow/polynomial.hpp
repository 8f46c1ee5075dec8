#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace qwgrow {

using BigInt = boost::multiprecision::cpp_int;

/// Dense univariate polynomial over the integers, coefficients in ascending degree.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<BigInt> coefficients);
  IntPolynomial(std::initializer_list<long long> coefficients);

  /// c * x^k
  static IntPolynomial monomial(BigInt c, std::size_t k);

  const std::vector<BigInt>& coefficients() const noexcept { return coefficients_; }
  bool is_zero() const noexcept { return coefficients_.empty(); }
  /// Degree; -1 for the zero polynomial.
  long degree() const noexcept { return static_cast<long>(coefficients_.size()) - 1; }
  BigInt coefficient(std::size_t k) const;
  const BigInt& leading() const;

  BigInt evaluate(const BigInt& x) const;
  long double evaluate(long double x) const;

  IntPolynomial derivative() const;
  /// gcd of the coefficients, non-negative.
  BigInt content() const;
  /// Divided by its content, leading coefficient made positive.
  IntPolynomial primitive_part() const;

  IntPolynomial operator-() const;
  friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator*(const BigInt& c, const IntPolynomial& p);
  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

  /// Human-readable form, e.g. "x^4 - 3x^2".
  std::string to_string() const;

 private:
  void trim();
  std::vector<BigInt> coefficients_;
};

/// Quotient of a by b; throws if the division does not come out exact over the integers.
IntPolynomial divide_exact(const IntPolynomial& a, const IntPolynomial& b);

/// Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b.
IntPolynomial pseudo_remainder(const IntPolynomial& a, const IntPolynomial& b);

/// Primitive gcd with positive leading coefficient (primitive remainder sequence).
IntPolynomial gcd(IntPolynomial a, IntPolynomial b);

/// Yun decomposition: pairs (f_i, i) with p = c * prod f_i^i and every f_i square-free, primitive.
std::vector<std::pair<IntPolynomial, std::size_t>> square_free_decomposition(const IntPolynomial& p);

/*
 * All roots, with multiplicity and sorted ascending, of a polynomial whose
 * roots are all real (e.g. a characteristic polynomial of a symmetric
 * matrix). Each square-free factor is solved by bisection inside the
 * intervals cut out by the roots of its derivative, which for a real-rooted
 * square-free polynomial contain exactly one root each.
 */
std::vector<double> real_roots(const IntPolynomial& p);

}  // namespace qwgrow
