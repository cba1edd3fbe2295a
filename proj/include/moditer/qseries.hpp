#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace moditer {

using Rational = mpq_class;
using Integer = mpz_class;

/// n/d in lowest terms (mpq_class(n, d) alone leaves the fraction uncanonicalised).
inline Rational ratio(long n, long d) {
    Rational r(n, d);
    r.canonicalize();
    return r;
}

/// Truncated power series in q with exact rational coefficients:
///
///     q^(prefactor_num/24) * (c_0 + c_1 q + ... + c_M q^M + O(q^(M+1)))
///
/// The prefactor lattice is 1/24 so every eta quotient is representable.
/// Binary operations keep only the terms both operands determine; an order
/// mismatch is resolved to the smaller precision, never reported as an error.
class QSeries {
public:
    QSeries() = default;
    explicit QSeries(std::vector<Rational> coeffs, int prefactor_num = 0);

    static QSeries zero(int order);
    static QSeries one(int order);
    /// q^k truncated at order M (k <= M).
    static QSeries monomial(int k, int order, Rational c = 1);

    int order() const { return static_cast<int>(c_.size()) - 1; }
    int prefactor_num() const { return prefactor_; }
    const Rational& operator[](int k) const { return c_.at(static_cast<std::size_t>(k)); }
    const std::vector<Rational>& coeffs() const { return c_; }

    /// Index of the first nonzero mantissa coefficient, or -1 for the zero series.
    int valuation() const;
    bool is_zero() const { return valuation() < 0; }

    /// Leading zeros moved into the prefactor; precision is unchanged.
    QSeries stripped() const;
    /// Whole powers of q folded out of the prefactor so 0 <= prefactor_num < 24
    /// whenever the leading terms allow it. Canonical forms compare coefficient-wise.
    QSeries canonical() const;

    QSeries truncated(int order) const;
    /// q -> q^l. The result keeps the same order M (terms beyond q^M are dropped).
    QSeries substitute(int l) const;

    QSeries operator-() const;
    QSeries& operator+=(const QSeries& rhs);
    QSeries& operator-=(const QSeries& rhs);
    QSeries& operator*=(const QSeries& rhs);
    QSeries& operator/=(const QSeries& rhs);
    QSeries& operator*=(const Rational& c);

    friend QSeries operator+(QSeries a, const QSeries& b) { return a += b; }
    friend QSeries operator-(QSeries a, const QSeries& b) { return a -= b; }
    friend QSeries operator*(QSeries a, const QSeries& b) { return a *= b; }
    friend QSeries operator/(QSeries a, const QSeries& b) { return a /= b; }
    friend QSeries operator*(QSeries a, const Rational& c) { return a *= c; }
    friend QSeries operator*(const Rational& c, QSeries a) { return a *= c; }

    QSeries pow(long exponent) const;

    /// Equal on every term both series determine (after canonicalisation).
    friend bool operator==(const QSeries& a, const QSeries& b);

    /// Mantissa as doubles; throws unless the prefactor is an integral power of q.
    std::vector<double> to_doubles() const;
    std::string to_string(int max_terms = 12) const;

private:
    int prefactor_ = 0;
    std::vector<Rational> c_{Rational(0)};
};

enum class SeriesOp { Add, Sub, Mul, Div, Pow };

/// Dispatches to the operators above; `exponent` is used only for Pow.
QSeries series_arith(const QSeries& lhs, const QSeries& rhs, SeriesOp op, long exponent = 0);

/// Exact Bernoulli number B_k (B_1 = -1/2). Odd k > 1 gives 0.
Rational bernoulli(int k);

/// sigma_k(n) = sum of d^k over the divisors d of n.
Integer sigma(int k, long n);

/// Divisor sums sigma_k(1..M) by sieve; index 0 is unused (zero).
std::vector<Integer> sigma_table(int k, int M);

/// E_k(l z) to order M.
QSeries eisenstein_series(int k, int l, int M);

/// eta(l z): prefactor_num = l, mantissa prod (1 - q^(l n)).
QSeries eta_series(int l, int M);

/// theta(z) = sum over n in Z of q^(n^2).
QSeries theta_series(int M);

/// Built-in named series: "F", "G", "theta4", "delta", "lambda", "E<k>" (level-1
/// Eisenstein, e.g. "E4"), "G-16F".
QSeries builtin_form(std::string_view name, int M);

/// (1 / 2 pi i) d/dz log s, returned as a q-series.
QSeries logderiv(const QSeries& s);

}  // namespace moditer
