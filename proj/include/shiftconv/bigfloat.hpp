#pragma once

// Minimal value-semantic wrapper around an MPFR float.  Every value carries
// its own precision; binary operations produce a result at the larger of the
// two operand precisions, so no process-global state is involved.

#include <mpfr.h>

#include <compare>
#include <string>

namespace shiftconv {

class BigFloat {
public:
    static constexpr long kDefaultBits = 128;

    explicit BigFloat(long bits = kDefaultBits);
    BigFloat(long value, long bits);
    BigFloat(int value, long bits) : BigFloat(static_cast<long>(value), bits) {}
    BigFloat(double value, long bits);
    BigFloat(long double value, long bits);
    static BigFloat from_string(const std::string& decimal, long bits);

    BigFloat(const BigFloat& other);
    BigFloat(BigFloat&& other) noexcept;
    BigFloat& operator=(const BigFloat& other);
    BigFloat& operator=(BigFloat&& other) noexcept;
    ~BigFloat();

    long bits() const { return static_cast<long>(mpfr_get_prec(v_)); }
    BigFloat with_bits(long bits) const;

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long double to_long_double() const { return mpfr_get_ld(v_, MPFR_RNDN); }
    std::string to_string(int digits = 0) const;

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    BigFloat& operator+=(const BigFloat& rhs);
    BigFloat& operator-=(const BigFloat& rhs);
    BigFloat& operator*=(const BigFloat& rhs);
    BigFloat& operator/=(const BigFloat& rhs);
    BigFloat& operator*=(long rhs);
    BigFloat& operator/=(long rhs);

    friend BigFloat operator+(BigFloat a, const BigFloat& b) { return a += b; }
    friend BigFloat operator-(BigFloat a, const BigFloat& b) { return a -= b; }
    friend BigFloat operator*(BigFloat a, const BigFloat& b) { return a *= b; }
    friend BigFloat operator/(BigFloat a, const BigFloat& b) { return a /= b; }
    friend BigFloat operator*(BigFloat a, long b) { return a *= b; }
    friend BigFloat operator/(BigFloat a, long b) { return a /= b; }
    BigFloat operator-() const;

    friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend std::partial_ordering operator<=>(const BigFloat& a, const BigFloat& b);

    friend BigFloat abs(const BigFloat& x);
    friend BigFloat sqrt(const BigFloat& x);
    friend BigFloat exp(const BigFloat& x);
    friend BigFloat log(const BigFloat& x);
    friend BigFloat cos(const BigFloat& x);
    friend BigFloat sin(const BigFloat& x);
    friend BigFloat pow(const BigFloat& x, const BigFloat& y);
    friend BigFloat pow(const BigFloat& x, long y);

    static BigFloat pi(long bits);

    mpfr_srcptr get() const { return v_; }
    mpfr_ptr get() { return v_; }

private:
    mpfr_t v_;
};

}  // namespace shiftconv
