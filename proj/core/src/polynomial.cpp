#include "qwgrow/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "qwgrow/error.hpp"

namespace qwgrow {

IntPolynomial::IntPolynomial(std::vector<BigInt> coefficients) : coefficients_(std::move(coefficients)) {
  trim();
}

IntPolynomial::IntPolynomial(std::initializer_list<long long> coefficients) {
  coefficients_.reserve(coefficients.size());
  for (long long c : coefficients) coefficients_.emplace_back(c);
  trim();
}

IntPolynomial IntPolynomial::monomial(BigInt c, std::size_t k) {
  std::vector<BigInt> coeffs(k + 1);
  coeffs[k] = std::move(c);
  return IntPolynomial(std::move(coeffs));
}

void IntPolynomial::trim() {
  while (!coefficients_.empty() && coefficients_.back() == 0) coefficients_.pop_back();
}

BigInt IntPolynomial::coefficient(std::size_t k) const {
  return k < coefficients_.size() ? coefficients_[k] : BigInt(0);
}

const BigInt& IntPolynomial::leading() const {
  if (coefficients_.empty()) throw InvalidArgument("zero polynomial has no leading coefficient");
  return coefficients_.back();
}

BigInt IntPolynomial::evaluate(const BigInt& x) const {
  BigInt acc = 0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

long double IntPolynomial::evaluate(long double x) const {
  long double acc = 0.0L;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
    acc = acc * x + it->convert_to<long double>();
  }
  return acc;
}

IntPolynomial IntPolynomial::derivative() const {
  if (coefficients_.size() <= 1) return {};
  std::vector<BigInt> d(coefficients_.size() - 1);
  for (std::size_t k = 1; k < coefficients_.size(); ++k) d[k - 1] = coefficients_[k] * k;
  return IntPolynomial(std::move(d));
}

BigInt IntPolynomial::content() const {
  BigInt g = 0;
  for (const auto& c : coefficients_) g = boost::multiprecision::gcd(g, c);
  return boost::multiprecision::abs(g);
}

IntPolynomial IntPolynomial::primitive_part() const {
  if (is_zero()) return {};
  BigInt c = content();
  if (leading() < 0) c = -c;
  std::vector<BigInt> out = coefficients_;
  for (auto& x : out) x /= c;
  return IntPolynomial(std::move(out));
}

IntPolynomial IntPolynomial::operator-() const {
  std::vector<BigInt> out = coefficients_;
  for (auto& x : out) x = -x;
  return IntPolynomial(std::move(out));
}

IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
  std::vector<BigInt> out(std::max(a.coefficients_.size(), b.coefficients_.size()));
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = a.coefficient(k) + b.coefficient(k);
  return IntPolynomial(std::move(out));
}

IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) { return a + (-b); }

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<BigInt> out(a.coefficients_.size() + b.coefficients_.size() - 1);
  for (std::size_t i = 0; i < a.coefficients_.size(); ++i) {
    if (a.coefficients_[i] == 0) continue;
    for (std::size_t j = 0; j < b.coefficients_.size(); ++j) {
      out[i + j] += a.coefficients_[i] * b.coefficients_[j];
    }
  }
  return IntPolynomial(std::move(out));
}

IntPolynomial operator*(const BigInt& c, const IntPolynomial& p) {
  std::vector<BigInt> out = p.coefficients_;
  for (auto& x : out) x *= c;
  return IntPolynomial(std::move(out));
}

std::string IntPolynomial::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  for (std::size_t k = coefficients_.size(); k-- > 0;) {
    const BigInt& c = coefficients_[k];
    if (c == 0) continue;
    const BigInt magnitude = boost::multiprecision::abs(c);
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    if (magnitude != 1 || k == 0) out += magnitude.str();
    if (k >= 1) out += "x";
    if (k >= 2) out += "^" + std::to_string(k);
  }
  return out;
}

IntPolynomial divide_exact(const IntPolynomial& a, const IntPolynomial& b) {
  if (b.is_zero()) throw InvalidArgument("polynomial division by zero");
  if (a.degree() < b.degree()) {
    if (a.is_zero()) return {};
    throw Error("inexact polynomial division");
  }
  std::vector<BigInt> rem = a.coefficients();
  const auto& divisor = b.coefficients();
  const std::size_t db = divisor.size() - 1;
  std::vector<BigInt> quotient(rem.size() - db);
  for (std::size_t k = quotient.size(); k-- > 0;) {
    const BigInt& top = rem[k + db];
    if (top % divisor.back() != 0) throw Error("inexact polynomial division");
    BigInt q = top / divisor.back();
    for (std::size_t j = 0; j <= db; ++j) rem[k + j] -= q * divisor[j];
    quotient[k] = std::move(q);
  }
  if (std::any_of(rem.begin(), rem.end(), [](const BigInt& x) { return x != 0; })) {
    throw Error("inexact polynomial division");
  }
  return IntPolynomial(std::move(quotient));
}

IntPolynomial pseudo_remainder(const IntPolynomial& a, const IntPolynomial& b) {
  if (b.is_zero()) throw InvalidArgument("pseudo-remainder by zero polynomial");
  if (a.degree() < b.degree()) return a;
  std::vector<BigInt> rem = a.coefficients();
  const auto& divisor = b.coefficients();
  const std::size_t db = divisor.size() - 1;
  const BigInt& lead = divisor.back();
  for (std::size_t top = rem.size(); top-- > db;) {
    const BigInt factor = rem[top];
    for (auto& x : rem) x *= lead;
    for (std::size_t j = 0; j <= db; ++j) rem[top - db + j] -= factor * divisor[j];
  }
  return IntPolynomial(std::move(rem));
}

IntPolynomial gcd(IntPolynomial a, IntPolynomial b) {
  if (a.is_zero()) return b.primitive_part();
  if (b.is_zero()) return a.primitive_part();
  a = a.primitive_part();
  b = b.primitive_part();
  if (a.degree() < b.degree()) std::swap(a, b);
  while (!b.is_zero()) {
    IntPolynomial r = pseudo_remainder(a, b);
    a = std::move(b);
    b = r.primitive_part();
  }
  return a.primitive_part();
}

std::vector<std::pair<IntPolynomial, std::size_t>> square_free_decomposition(const IntPolynomial& p) {
  std::vector<std::pair<IntPolynomial, std::size_t>> factors;
  if (p.degree() < 1) return factors;

  const IntPolynomial f = p.primitive_part();
  const IntPolynomial df = f.derivative();
  const IntPolynomial g = gcd(f, df);
  IntPolynomial c = divide_exact(f, g);
  IntPolynomial d = divide_exact(df, g) - c.derivative();
  for (std::size_t i = 1; c.degree() >= 1; ++i) {
    IntPolynomial a = gcd(c, d);
    if (a.degree() >= 1) factors.emplace_back(a, i);
    c = divide_exact(c, a);
    d = divide_exact(d, a) - c.derivative();
  }
  return factors;
}

namespace {

long double cauchy_bound(const IntPolynomial& p) {
  const long double lead = boost::multiprecision::abs(p.leading()).convert_to<long double>();
  long double worst = 0.0L;
  for (std::size_t k = 0; k + 1 < p.coefficients().size(); ++k) {
    worst = std::max(worst, boost::multiprecision::abs(p.coefficients()[k]).convert_to<long double>() / lead);
  }
  return 1.0L + worst;
}

long double bisect(const IntPolynomial& p, long double lo, long double hi) {
  long double f_lo = p.evaluate(lo);
  if (f_lo == 0.0L) return lo;
  for (int iter = 0; iter < 200 && hi - lo > 0.0L; ++iter) {
    const long double mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    const long double f_mid = p.evaluate(mid);
    if (f_mid == 0.0L) return mid;
    if ((f_mid < 0) == (f_lo < 0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return lo + (hi - lo) / 2;
}

// Roots of a square-free polynomial known to be real-rooted.
std::vector<long double> simple_real_roots(const IntPolynomial& p) {
  if (p.degree() < 1) return {};
  if (p.degree() == 1) {
    return {-p.coefficient(0).convert_to<long double>() / p.coefficient(1).convert_to<long double>()};
  }
  const std::vector<long double> critical = simple_real_roots(p.derivative().primitive_part());
  const long double bound = cauchy_bound(p);
  std::vector<long double> roots;
  roots.reserve(critical.size() + 1);
  long double lo = -bound;
  for (std::size_t i = 0; i <= critical.size(); ++i) {
    const long double hi = i < critical.size() ? critical[i] : bound;
    roots.push_back(bisect(p, lo, hi));
    lo = hi;
  }
  return roots;
}

}  // namespace

std::vector<double> real_roots(const IntPolynomial& p) {
  std::vector<double> roots;
  for (const auto& [factor, multiplicity] : square_free_decomposition(p)) {
    for (long double r : simple_real_roots(factor)) {
      roots.insert(roots.end(), multiplicity, static_cast<double>(r));
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace qwgrow
