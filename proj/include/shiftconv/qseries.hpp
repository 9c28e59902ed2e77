#pragma once

// Truncated Laurent series in q with exact rational coefficients, and the same
// objects reduced modulo a prime power.
//
// A series knows the half-open exponent window [lead_order, trunc_order) on
// which its coefficients are trustworthy.  Every operation narrows the window
// to what its inputs actually determine; nothing is extrapolated.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace shiftconv {

using Integer = mpz_class;
using Rational = mpq_class;

class ResidueSeries;

class QSeries {
public:
    // Empty window [0, 0).
    QSeries() = default;
    // All-zero series on [lead, trunc).
    QSeries(long lead, long trunc);

    // coeffs[i] is the coefficient of q^(lead + i); trailing entries beyond
    // trunc are rejected, missing ones are zero.
    static QSeries from_dense(long lead, long trunc, std::vector<Rational> coeffs);
    static QSeries from_terms(long lead, long trunc, const std::map<long, Rational>& terms);
    static QSeries monomial(const Rational& c, long exponent, long trunc);
    static QSeries constant(const Rational& c, long trunc) { return monomial(c, 0, trunc); }

    long lead_order() const { return lead_; }
    long trunc_order() const { return trunc_; }
    bool empty_window() const { return lead_ >= trunc_; }

    // Coefficient of q^n.  Zero below the lead; throws std::out_of_range at or
    // beyond trunc_order, where the coefficient is unknown.
    Rational coefficient(long n) const;
    Rational operator[](long n) const { return coefficient(n); }

    // First exponent with a nonzero coefficient, if any inside the window.
    std::optional<long> valuation() const;
    bool is_zero() const { return !valuation().has_value(); }

    // Drops leading stored zeros (the window's upper bound is unchanged).
    QSeries normalized() const;
    QSeries truncated(long trunc) const;
    std::map<long, Rational> nonzero_terms() const;

    // Multiplies by q^s.
    QSeries shifted(long s) const;
    QSeries scaled(const Rational& c) const;

    // True when every coefficient is an integer.
    bool is_integral() const;

    QSeries& operator+=(const QSeries& rhs);
    QSeries& operator-=(const QSeries& rhs);
    QSeries operator-() const;

    // Same window and same coefficients (stored zeros ignored).
    friend bool operator==(const QSeries& a, const QSeries& b);
    // Coefficients agree on the intersection of both windows.
    bool agrees_with(const QSeries& other) const;

    const std::vector<Rational>& dense() const { return c_; }

private:
    long lead_ = 0;
    long trunc_ = 0;
    std::vector<Rational> c_;  // c_[i] <-> q^(lead_ + i)
};

QSeries operator+(QSeries a, const QSeries& b);
QSeries operator-(QSeries a, const QSeries& b);

// Exact Cauchy product; the result window ends at
// min(a.trunc + val(b), b.trunc + val(a)).
QSeries operator*(const QSeries& a, const QSeries& b);

QSeries pow(const QSeries& a, unsigned e);

// Multiplicative inverse.  The coefficient at lead_order must be nonzero,
// otherwise std::domain_error("non-invertible series").
QSeries invert(const QSeries& a);

// D = q d/dq applied j times: c_n -> n^j c_n.
QSeries d_operator(const QSeries& a, unsigned j);

// Sum over n != 0 of A(n) n^(1-k) q^n.
QSeries eichler_integral(const QSeries& a, int k);

// D(a) - (k/12) E2 a.  e2 must cover the window of a.
QSeries serre_derivative(const QSeries& a, int k, const QSeries& e2);

ResidueSeries reduce_mod(const QSeries& a, std::uint64_t p, unsigned T);

// Series over Z/p^T Z.
class ResidueSeries {
public:
    ResidueSeries() = default;
    ResidueSeries(std::uint64_t p, unsigned T, long lead, long trunc);

    static ResidueSeries from_dense(std::uint64_t p, unsigned T, long lead, long trunc,
                                    std::vector<std::uint64_t> residues);
    // Signed integers are reduced into [0, p^T).
    static ResidueSeries from_integers(std::uint64_t p, unsigned T, long lead, long trunc,
                                       const std::vector<std::int64_t>& values);

    std::uint64_t prime() const { return p_; }
    unsigned exponent() const { return T_; }
    std::uint64_t modulus() const { return mod_; }
    long lead_order() const { return lead_; }
    long trunc_order() const { return trunc_; }

    std::uint64_t coefficient(long n) const;
    std::uint64_t operator[](long n) const { return coefficient(n); }
    // v_p of the residue at q^n, capped at T (a zero residue reports T).
    unsigned valuation_at(long n) const;
    std::optional<long> valuation() const;

    ResidueSeries truncated(long trunc) const;
    ResidueSeries shifted(long s) const;
    ResidueSeries scaled(std::int64_t c) const;

    ResidueSeries& operator+=(const ResidueSeries& rhs);
    ResidueSeries& operator-=(const ResidueSeries& rhs);
    ResidueSeries operator-() const;

    friend bool operator==(const ResidueSeries& a, const ResidueSeries& b);
    bool agrees_with(const ResidueSeries& other) const;

    const std::vector<std::uint64_t>& dense() const { return c_; }

    // Reduces c into [0, modulus).
    std::uint64_t reduce(std::int64_t c) const;
    std::uint64_t reduce(const Integer& c) const;

private:
    void check_compatible(const ResidueSeries& rhs) const;

    std::uint64_t p_ = 0;
    unsigned T_ = 0;
    std::uint64_t mod_ = 1;
    long lead_ = 0;
    long trunc_ = 0;
    std::vector<std::uint64_t> c_;

    friend ResidueSeries operator*(const ResidueSeries& a, const ResidueSeries& b);
    friend ResidueSeries invert(const ResidueSeries& a);
    friend ResidueSeries d_operator(const ResidueSeries& a, unsigned j);
};

ResidueSeries operator+(ResidueSeries a, const ResidueSeries& b);
ResidueSeries operator-(ResidueSeries a, const ResidueSeries& b);
ResidueSeries operator*(const ResidueSeries& a, const ResidueSeries& b);
ResidueSeries pow(const ResidueSeries& a, unsigned e);
// Leading coefficient must be a unit mod p.
ResidueSeries invert(const ResidueSeries& a);
ResidueSeries d_operator(const ResidueSeries& a, unsigned j);

// Integer helpers shared by the residue code.
std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m);
// Inverse of a modulo m; std::domain_error if gcd(a, m) != 1.
std::uint64_t invmod(std::uint64_t a, std::uint64_t m);
std::uint64_t prime_power(std::uint64_t p, unsigned T);

}  // namespace shiftconv
