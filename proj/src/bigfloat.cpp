#include "shiftconv/bigfloat.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace shiftconv {

namespace {

mpfr_prec_t clamp_bits(long bits) {
    if (bits < MPFR_PREC_MIN || bits > 1L << 24) {
        throw std::invalid_argument("BigFloat: unsupported precision " + std::to_string(bits));
    }
    return static_cast<mpfr_prec_t>(bits);
}

}  // namespace

BigFloat::BigFloat(long bits) {
    mpfr_init2(v_, clamp_bits(bits));
    mpfr_set_zero(v_, 1);
}

BigFloat::BigFloat(long value, long bits) {
    mpfr_init2(v_, clamp_bits(bits));
    mpfr_set_si(v_, value, MPFR_RNDN);
}

BigFloat::BigFloat(double value, long bits) {
    mpfr_init2(v_, clamp_bits(bits));
    mpfr_set_d(v_, value, MPFR_RNDN);
}

BigFloat::BigFloat(long double value, long bits) {
    mpfr_init2(v_, clamp_bits(bits));
    mpfr_set_ld(v_, value, MPFR_RNDN);
}

BigFloat BigFloat::from_string(const std::string& decimal, long bits) {
    BigFloat r(bits);
    if (mpfr_set_str(r.v_, decimal.c_str(), 10, MPFR_RNDN) != 0) {
        throw std::invalid_argument("BigFloat: cannot parse '" + decimal + "'");
    }
    return r;
}

BigFloat::BigFloat(const BigFloat& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
    // Leave the moved-from object valid at minimal precision.
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, other.v_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
    if (this != &other) {
        mpfr_set_prec(v_, mpfr_get_prec(other.v_));
        mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
}

BigFloat::~BigFloat() { mpfr_clear(v_); }

BigFloat BigFloat::with_bits(long bits) const {
    BigFloat r(bits);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
}

std::string BigFloat::to_string(int digits) const {
    if (digits <= 0) {
        digits = static_cast<int>(static_cast<double>(bits()) * 0.30103) + 1;
    }
    std::vector<char> buf(static_cast<size_t>(digits) + 32);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
    return std::string(buf.data());
}

namespace {

// Promote the left operand so the result keeps the larger precision.
void promote(mpfr_ptr lhs, mpfr_srcptr rhs) {
    if (mpfr_get_prec(rhs) > mpfr_get_prec(lhs)) {
        mpfr_prec_round(lhs, mpfr_get_prec(rhs), MPFR_RNDN);
    }
}

}  // namespace

BigFloat& BigFloat::operator+=(const BigFloat& rhs) {
    promote(v_, rhs.v_);
    mpfr_add(v_, v_, rhs.v_, MPFR_RNDN);
    return *this;
}

BigFloat& BigFloat::operator-=(const BigFloat& rhs) {
    promote(v_, rhs.v_);
    mpfr_sub(v_, v_, rhs.v_, MPFR_RNDN);
    return *this;
}

BigFloat& BigFloat::operator*=(const BigFloat& rhs) {
    promote(v_, rhs.v_);
    mpfr_mul(v_, v_, rhs.v_, MPFR_RNDN);
    return *this;
}

BigFloat& BigFloat::operator/=(const BigFloat& rhs) {
    promote(v_, rhs.v_);
    mpfr_div(v_, v_, rhs.v_, MPFR_RNDN);
    return *this;
}

BigFloat& BigFloat::operator*=(long rhs) {
    mpfr_mul_si(v_, v_, rhs, MPFR_RNDN);
    return *this;
}

BigFloat& BigFloat::operator/=(long rhs) {
    mpfr_div_si(v_, v_, rhs, MPFR_RNDN);
    return *this;
}

BigFloat BigFloat::operator-() const {
    BigFloat r(*this);
    mpfr_neg(r.v_, r.v_, MPFR_RNDN);
    return r;
}

std::partial_ordering operator<=>(const BigFloat& a, const BigFloat& b) {
    if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
    const int c = mpfr_cmp(a.v_, b.v_);
    if (c < 0) return std::partial_ordering::less;
    if (c > 0) return std::partial_ordering::greater;
    return std::partial_ordering::equivalent;
}

BigFloat abs(const BigFloat& x) {
    BigFloat r(x.bits());
    mpfr_abs(r.v_, x.v_, MPFR_RNDN);
    return r;
}

BigFloat sqrt(const BigFloat& x) {
    BigFloat r(x.bits());
    mpfr_sqrt(r.v_, x.v_, MPFR_RNDN);
    return r;
}

BigFloat exp(const BigFloat& x) {
    BigFloat r(x.bits());
    mpfr_exp(r.v_, x.v_, MPFR_RNDN);
    return r;
}

BigFloat log(const BigFloat& x) {
    BigFloat r(x.bits());
    mpfr_log(r.v_, x.v_, MPFR_RNDN);
    return r;
}

BigFloat cos(const BigFloat& x) {
    BigFloat r(x.bits());
    mpfr_cos(r.v_, x.v_, MPFR_RNDN);
    return r;
}

BigFloat sin(const BigFloat& x) {
    BigFloat r(x.bits());
    mpfr_sin(r.v_, x.v_, MPFR_RNDN);
    return r;
}

BigFloat pow(const BigFloat& x, const BigFloat& y) {
    BigFloat r(std::max(x.bits(), y.bits()));
    mpfr_pow(r.v_, x.v_, y.v_, MPFR_RNDN);
    return r;
}

BigFloat pow(const BigFloat& x, long y) {
    BigFloat r(x.bits());
    mpfr_pow_si(r.v_, x.v_, y, MPFR_RNDN);
    return r;
}

BigFloat BigFloat::pi(long bits) {
    BigFloat r(bits);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
}

}  // namespace shiftconv
