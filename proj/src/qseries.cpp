#include "shiftconv/qseries.hpp"

#include "shiftconv/parallel.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

namespace shiftconv {

namespace {

constexpr std::ptrdiff_t kConvolutionGrain = 64;

void check_window(long lead, long trunc) {
    if (lead > trunc) {
        throw std::invalid_argument("series window [" + std::to_string(lead) + ", " +
                                    std::to_string(trunc) + ") is inverted");
    }
}

struct IntegerImage {
    std::vector<Integer> values;  // series * denom, aligned with the source offset
    Integer denom = 1;
    std::vector<std::size_t> nonzero;
};

// Scales c[first, first + count) by the lcm of its denominators.
IntegerImage integer_image(const std::vector<Rational>& c, std::size_t first, std::size_t count) {
    IntegerImage img;
    for (std::size_t i = 0; i < count; ++i) {
        const auto& d = c[first + i].get_den();
        if (d != 1) mpz_lcm(img.denom.get_mpz_t(), img.denom.get_mpz_t(), d.get_mpz_t());
    }
    img.values.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const Rational& x = c[first + i];
        if (sgn(x) == 0) continue;
        if (img.denom == 1) {
            img.values[i] = x.get_num();
        } else {
            mpz_divexact(img.values[i].get_mpz_t(), img.denom.get_mpz_t(), x.get_den_mpz_t());
            img.values[i] *= x.get_num();
        }
        img.nonzero.push_back(i);
    }
    return img;
}

}  // namespace

QSeries::QSeries(long lead, long trunc) : lead_(lead), trunc_(trunc) {
    check_window(lead, trunc);
    c_.resize(static_cast<std::size_t>(trunc - lead));
}

QSeries QSeries::from_dense(long lead, long trunc, std::vector<Rational> coeffs) {
    check_window(lead, trunc);
    const auto width = static_cast<std::size_t>(trunc - lead);
    if (coeffs.size() > width) {
        throw std::invalid_argument("more coefficients than the window holds");
    }
    QSeries s;
    s.lead_ = lead;
    s.trunc_ = trunc;
    s.c_ = std::move(coeffs);
    s.c_.resize(width);
    return s;
}

QSeries QSeries::from_terms(long lead, long trunc, const std::map<long, Rational>& terms) {
    QSeries s(lead, trunc);
    for (const auto& [n, c] : terms) {
        if (n < lead || n >= trunc) {
            throw std::invalid_argument("exponent " + std::to_string(n) + " outside window");
        }
        s.c_[static_cast<std::size_t>(n - lead)] = c;
    }
    return s;
}

QSeries QSeries::monomial(const Rational& c, long exponent, long trunc) {
    if (exponent >= trunc) return QSeries(trunc, trunc);
    QSeries s(exponent, trunc);
    s.c_[0] = c;
    return s;
}

Rational QSeries::coefficient(long n) const {
    if (n >= trunc_) {
        throw std::out_of_range("coefficient of q^" + std::to_string(n) +
                                " lies beyond the truncation order " + std::to_string(trunc_));
    }
    if (n < lead_) return 0;
    return c_[static_cast<std::size_t>(n - lead_)];
}

std::optional<long> QSeries::valuation() const {
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (sgn(c_[i]) != 0) return lead_ + static_cast<long>(i);
    }
    return std::nullopt;
}

QSeries QSeries::normalized() const {
    const long v = valuation().value_or(trunc_);
    QSeries s;
    s.lead_ = v;
    s.trunc_ = trunc_;
    s.c_.assign(c_.begin() + (v - lead_), c_.end());
    return s;
}

QSeries QSeries::truncated(long trunc) const {
    if (trunc >= trunc_) return *this;
    QSeries s;
    s.lead_ = std::min(lead_, trunc);
    s.trunc_ = trunc;
    s.c_.assign(c_.begin(), c_.begin() + (trunc - s.lead_));
    return s;
}

std::map<long, Rational> QSeries::nonzero_terms() const {
    std::map<long, Rational> out;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (sgn(c_[i]) != 0) out.emplace(lead_ + static_cast<long>(i), c_[i]);
    }
    return out;
}

QSeries QSeries::shifted(long s) const {
    QSeries r = *this;
    r.lead_ += s;
    r.trunc_ += s;
    return r;
}

QSeries QSeries::scaled(const Rational& c) const {
    QSeries r = *this;
    for (auto& x : r.c_) x *= c;
    return r;
}

bool QSeries::is_integral() const {
    return std::all_of(c_.begin(), c_.end(), [](const Rational& x) { return x.get_den() == 1; });
}

QSeries& QSeries::operator+=(const QSeries& rhs) {
    const long trunc = std::min(trunc_, rhs.trunc_);
    const long lead = std::min(std::min(lead_, rhs.lead_), trunc);
    QSeries r(lead, trunc);
    for (long n = lead; n < trunc; ++n) {
        auto& slot = r.c_[static_cast<std::size_t>(n - lead)];
        if (n >= lead_) slot = c_[static_cast<std::size_t>(n - lead_)];
        if (n >= rhs.lead_) slot += rhs.c_[static_cast<std::size_t>(n - rhs.lead_)];
    }
    *this = std::move(r);
    return *this;
}

QSeries& QSeries::operator-=(const QSeries& rhs) { return *this += -rhs; }

QSeries QSeries::operator-() const {
    QSeries r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

bool operator==(const QSeries& a, const QSeries& b) {
    if (a.trunc_ != b.trunc_) return false;
    return a.agrees_with(b);
}

bool QSeries::agrees_with(const QSeries& other) const {
    const long trunc = std::min(trunc_, other.trunc_);
    const long lead = std::min(lead_, other.lead_);
    for (long n = lead; n < trunc; ++n) {
        if (coefficient(n) != other.coefficient(n)) return false;
    }
    return true;
}

QSeries operator+(QSeries a, const QSeries& b) { return a += b; }
QSeries operator-(QSeries a, const QSeries& b) { return a -= b; }

QSeries operator*(const QSeries& a, const QSeries& b) {
    const long la = a.valuation().value_or(a.trunc_order());
    const long lb = b.valuation().value_or(b.trunc_order());
    const long trunc = std::min(a.trunc_order() + lb, b.trunc_order() + la);
    const long lead = std::min(la + lb, trunc);
    const auto width = static_cast<std::size_t>(trunc - lead);
    if (width == 0) return QSeries(lead, trunc);

    // Common-denominator extraction: convolve integer images, divide once.
    const IntegerImage ia = integer_image(a.dense(), static_cast<std::size_t>(la - a.lead_order()), width);
    const IntegerImage ib = integer_image(b.dense(), static_cast<std::size_t>(lb - b.lead_order()), width);
    const bool a_outer = ia.nonzero.size() <= ib.nonzero.size();
    const IntegerImage& outer = a_outer ? ia : ib;
    const IntegerImage& inner = a_outer ? ib : ia;
    const Integer denom = ia.denom * ib.denom;

    std::vector<Rational> out(width);
    parallel_for(0, static_cast<std::ptrdiff_t>(width), kConvolutionGrain,
                 [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
                     Integer acc;
                     for (auto h = static_cast<std::size_t>(lo); h < static_cast<std::size_t>(hi); ++h) {
                         acc = 0;
                         for (std::size_t i : outer.nonzero) {
                             if (i > h) break;
                             const Integer& y = inner.values[h - i];
                             if (sgn(y) != 0) {
                                 mpz_addmul(acc.get_mpz_t(), outer.values[i].get_mpz_t(), y.get_mpz_t());
                             }
                         }
                         if (sgn(acc) != 0) {
                             out[h] = Rational(acc, denom);
                             out[h].canonicalize();
                         }
                     }
                 });
    return QSeries::from_dense(lead, trunc, std::move(out));
}

QSeries pow(const QSeries& a, unsigned e) {
    const long v = a.valuation().value_or(a.trunc_order());
    QSeries result = QSeries::constant(1, a.trunc_order() - v);
    QSeries base = a;
    bool first = true;
    while (e > 0) {
        if (e & 1u) {
            result = first ? base : result * base;
            first = false;
        }
        e >>= 1u;
        if (e > 0) base = base * base;
    }
    return result;
}

QSeries invert(const QSeries& a) {
    if (a.empty_window() || sgn(a.coefficient(a.lead_order())) == 0) {
        throw std::domain_error("non-invertible series");
    }
    const long lead = a.lead_order();
    const auto width = static_cast<std::size_t>(a.trunc_order() - lead);
    const auto& c = a.dense();
    std::vector<Rational> b(width);

    if (a.is_integral() && abs(c[0]) == 1) {
        // Unit leading coefficient: the recurrence stays in Z.
        const Integer c0 = c[0].get_num();
        std::vector<Integer> bi(width);
        bi[0] = c0;
        Integer acc;
        for (std::size_t n = 1; n < width; ++n) {
            acc = 0;
            for (std::size_t i = 1; i <= n; ++i) {
                const auto& ai = c[i].get_num();
                if (sgn(ai) != 0 && sgn(bi[n - i]) != 0) {
                    mpz_addmul(acc.get_mpz_t(), ai.get_mpz_t(), bi[n - i].get_mpz_t());
                }
            }
            bi[n] = -acc * c0;
        }
        for (std::size_t n = 0; n < width; ++n) b[n] = bi[n];
    } else {
        const Rational inv0 = 1 / c[0];
        b[0] = inv0;
        Rational acc;
        for (std::size_t n = 1; n < width; ++n) {
            acc = 0;
            for (std::size_t i = 1; i <= n; ++i) {
                if (sgn(c[i]) != 0 && sgn(b[n - i]) != 0) acc += c[i] * b[n - i];
            }
            b[n] = -acc * inv0;
        }
    }
    return QSeries::from_dense(-lead, -lead + static_cast<long>(width), std::move(b));
}

QSeries d_operator(const QSeries& a, unsigned j) {
    if (j == 0) return a;
    std::vector<Rational> c = a.dense();
    Integer factor;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (sgn(c[i]) == 0) continue;
        const long n = a.lead_order() + static_cast<long>(i);
        mpz_set_si(factor.get_mpz_t(), n);
        mpz_pow_ui(factor.get_mpz_t(), factor.get_mpz_t(), j);
        c[i] *= factor;
    }
    return QSeries::from_dense(a.lead_order(), a.trunc_order(), std::move(c));
}

QSeries eichler_integral(const QSeries& a, int k) {
    std::vector<Rational> c = a.dense();
    const int e = k - 1;
    Integer power;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const long n = a.lead_order() + static_cast<long>(i);
        if (n == 0) {
            c[i] = 0;
            continue;
        }
        if (sgn(c[i]) == 0 || e == 0) continue;
        mpz_set_si(power.get_mpz_t(), n);
        mpz_pow_ui(power.get_mpz_t(), power.get_mpz_t(), static_cast<unsigned long>(std::abs(e)));
        if (e > 0) {
            c[i] /= power;
        } else {
            c[i] *= power;
        }
    }
    return QSeries::from_dense(a.lead_order(), a.trunc_order(), std::move(c));
}

QSeries serre_derivative(const QSeries& a, int k, const QSeries& e2) {
    if (e2.lead_order() > 0 || e2.trunc_order() < a.trunc_order() - a.valuation().value_or(a.lead_order())) {
        throw std::invalid_argument("E2 does not cover the window of the series");
    }
    Rational w(k, 12);
    w.canonicalize();
    return d_operator(a, 1) - (e2 * a).scaled(w);
}

// ---------------------------------------------------------------------------
// Residue arithmetic

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e > 0) {
        if (e & 1u) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1u;
    }
    return r;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t m) {
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = static_cast<std::int64_t>(m), new_r = static_cast<std::int64_t>(a % m);
    while (new_r != 0) {
        const std::int64_t q = r / new_r;
        t = std::exchange(new_t, t - q * new_t);
        r = std::exchange(new_r, r - q * new_r);
    }
    if (r != 1) {
        throw std::domain_error(std::to_string(a) + " is not invertible modulo " + std::to_string(m));
    }
    if (t < 0) t += static_cast<std::int64_t>(m);
    return static_cast<std::uint64_t>(t);
}

std::uint64_t prime_power(std::uint64_t p, unsigned T) {
    if (p < 2) throw std::invalid_argument("modulus base must be a prime >= 2");
    unsigned __int128 m = 1;
    for (unsigned i = 0; i < T; ++i) {
        m *= p;
        if (m > (static_cast<unsigned __int128>(1) << 62)) {
            throw std::invalid_argument("p^T exceeds 2^62");
        }
    }
    return static_cast<std::uint64_t>(m);
}

ResidueSeries reduce_mod(const QSeries& a, std::uint64_t p, unsigned T) {
    ResidueSeries r(p, T, a.lead_order(), a.trunc_order());
    std::vector<std::uint64_t> out(a.dense().size());
    const Integer pz = static_cast<unsigned long>(p);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Rational& x = a.dense()[i];
        if (sgn(x) == 0) continue;
        if (mpz_divisible_p(x.get_den_mpz_t(), pz.get_mpz_t())) {
            throw std::domain_error("denominator divisible by " + std::to_string(p) + " at exponent " +
                                    std::to_string(a.lead_order() + static_cast<long>(i)));
        }
        out[i] = mulmod(r.reduce(x.get_num()), invmod(r.reduce(x.get_den()), r.modulus()), r.modulus());
    }
    return ResidueSeries::from_dense(p, T, a.lead_order(), a.trunc_order(), std::move(out));
}

ResidueSeries::ResidueSeries(std::uint64_t p, unsigned T, long lead, long trunc)
    : p_(p), T_(T), mod_(prime_power(p, T)), lead_(lead), trunc_(trunc) {
    check_window(lead, trunc);
    c_.resize(static_cast<std::size_t>(trunc - lead));
}

ResidueSeries ResidueSeries::from_dense(std::uint64_t p, unsigned T, long lead, long trunc,
                                        std::vector<std::uint64_t> residues) {
    ResidueSeries s(p, T, lead, trunc);
    if (residues.size() > s.c_.size()) {
        throw std::invalid_argument("more residues than the window holds");
    }
    residues.resize(s.c_.size());
    for (auto& x : residues) x %= s.mod_;
    s.c_ = std::move(residues);
    return s;
}

ResidueSeries ResidueSeries::from_integers(std::uint64_t p, unsigned T, long lead, long trunc,
                                           const std::vector<std::int64_t>& values) {
    ResidueSeries s(p, T, lead, trunc);
    if (values.size() > s.c_.size()) {
        throw std::invalid_argument("more values than the window holds");
    }
    for (std::size_t i = 0; i < values.size(); ++i) s.c_[i] = s.reduce(values[i]);
    return s;
}

std::uint64_t ResidueSeries::reduce(std::int64_t c) const {
    const auto m = static_cast<std::int64_t>(mod_);
    std::int64_t r = c % m;
    if (r < 0) r += m;
    return static_cast<std::uint64_t>(r);
}

std::uint64_t ResidueSeries::reduce(const Integer& c) const {
    Integer r;
    const Integer m = static_cast<unsigned long>(mod_);
    mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    return r.get_ui();
}

std::uint64_t ResidueSeries::coefficient(long n) const {
    if (n >= trunc_) {
        throw std::out_of_range("residue of q^" + std::to_string(n) + " lies beyond the truncation order " +
                                std::to_string(trunc_));
    }
    if (n < lead_) return 0;
    return c_[static_cast<std::size_t>(n - lead_)];
}

unsigned ResidueSeries::valuation_at(long n) const {
    std::uint64_t x = coefficient(n);
    if (x == 0) return T_;
    unsigned v = 0;
    while (x % p_ == 0) {
        x /= p_;
        ++v;
    }
    return v;
}

std::optional<long> ResidueSeries::valuation() const {
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] != 0) return lead_ + static_cast<long>(i);
    }
    return std::nullopt;
}

ResidueSeries ResidueSeries::truncated(long trunc) const {
    if (trunc >= trunc_) return *this;
    ResidueSeries s = *this;
    s.lead_ = std::min(lead_, trunc);
    s.trunc_ = trunc;
    s.c_.resize(static_cast<std::size_t>(trunc - s.lead_));
    return s;
}

ResidueSeries ResidueSeries::shifted(long s) const {
    ResidueSeries r = *this;
    r.lead_ += s;
    r.trunc_ += s;
    return r;
}

ResidueSeries ResidueSeries::scaled(std::int64_t c) const {
    ResidueSeries r = *this;
    const std::uint64_t f = reduce(c);
    for (auto& x : r.c_) x = mulmod(x, f, mod_);
    return r;
}

void ResidueSeries::check_compatible(const ResidueSeries& rhs) const {
    if (p_ != rhs.p_ || T_ != rhs.T_) {
        throw std::invalid_argument("residue series with different moduli");
    }
}

ResidueSeries& ResidueSeries::operator+=(const ResidueSeries& rhs) {
    check_compatible(rhs);
    const long trunc = std::min(trunc_, rhs.trunc_);
    const long lead = std::min(std::min(lead_, rhs.lead_), trunc);
    ResidueSeries r(p_, T_, lead, trunc);
    for (long n = lead; n < trunc; ++n) {
        std::uint64_t x = (n >= lead_) ? c_[static_cast<std::size_t>(n - lead_)] : 0;
        if (n >= rhs.lead_) x = (x + rhs.c_[static_cast<std::size_t>(n - rhs.lead_)]) % mod_;
        r.c_[static_cast<std::size_t>(n - lead)] = x;
    }
    *this = std::move(r);
    return *this;
}

ResidueSeries& ResidueSeries::operator-=(const ResidueSeries& rhs) { return *this += -rhs; }

ResidueSeries ResidueSeries::operator-() const {
    ResidueSeries r = *this;
    for (auto& x : r.c_) x = (x == 0) ? 0 : mod_ - x;
    return r;
}

bool operator==(const ResidueSeries& a, const ResidueSeries& b) {
    return a.p_ == b.p_ && a.T_ == b.T_ && a.trunc_ == b.trunc_ && a.agrees_with(b);
}

bool ResidueSeries::agrees_with(const ResidueSeries& other) const {
    check_compatible(other);
    const long trunc = std::min(trunc_, other.trunc_);
    const long lead = std::min(lead_, other.lead_);
    for (long n = lead; n < trunc; ++n) {
        if (coefficient(n) != other.coefficient(n)) return false;
    }
    return true;
}

ResidueSeries operator+(ResidueSeries a, const ResidueSeries& b) { return a += b; }
ResidueSeries operator-(ResidueSeries a, const ResidueSeries& b) { return a -= b; }

ResidueSeries operator*(const ResidueSeries& a, const ResidueSeries& b) {
    a.check_compatible(b);
    const long la = a.valuation().value_or(a.trunc_);
    const long lb = b.valuation().value_or(b.trunc_);
    const long trunc = std::min(a.trunc_ + lb, b.trunc_ + la);
    const long lead = std::min(la + lb, trunc);
    ResidueSeries r(a.p_, a.T_, lead, trunc);
    const auto width = static_cast<std::size_t>(trunc - lead);
    if (width == 0) return r;

    const std::uint64_t* av = a.c_.data() + (la - a.lead_);
    const std::uint64_t* bv = b.c_.data() + (lb - b.lead_);
    std::vector<std::size_t> nz_a, nz_b;
    for (std::size_t i = 0; i < width; ++i) {
        if (av[i] != 0) nz_a.push_back(i);
        if (bv[i] != 0) nz_b.push_back(i);
    }
    const bool a_outer = nz_a.size() <= nz_b.size();
    const auto& nz = a_outer ? nz_a : nz_b;
    const std::uint64_t* outer = a_outer ? av : bv;
    const std::uint64_t* inner = a_outer ? bv : av;
    const std::uint64_t m = a.mod_;
    // Below 2^32 each product fits in 64 bits and a 128-bit accumulator
    // absorbs every sum without intermediate reduction.
    const bool small = m < (1ULL << 32);

    parallel_for(0, static_cast<std::ptrdiff_t>(width), kConvolutionGrain * 16,
                 [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
                     for (auto h = static_cast<std::size_t>(lo); h < static_cast<std::size_t>(hi); ++h) {
                         if (small) {
                             unsigned __int128 acc = 0;
                             for (std::size_t i : nz) {
                                 if (i > h) break;
                                 acc += outer[i] * inner[h - i];
                             }
                             r.c_[h] = static_cast<std::uint64_t>(acc % m);
                         } else {
                             std::uint64_t acc = 0;
                             for (std::size_t i : nz) {
                                 if (i > h) break;
                                 acc = (acc + mulmod(outer[i], inner[h - i], m)) % m;
                             }
                             r.c_[h] = acc;
                         }
                     }
                 });
    return r;
}

ResidueSeries pow(const ResidueSeries& a, unsigned e) {
    const long v = a.valuation().value_or(a.trunc_order());
    ResidueSeries result = ResidueSeries::from_integers(a.prime(), a.exponent(), 0, a.trunc_order() - v, {1});
    ResidueSeries base = a;
    bool first = true;
    while (e > 0) {
        if (e & 1u) {
            result = first ? base : result * base;
            first = false;
        }
        e >>= 1u;
        if (e > 0) base = base * base;
    }
    return result;
}

ResidueSeries invert(const ResidueSeries& a) {
    if (a.c_.empty() || a.c_[0] % a.p_ == 0) {
        throw std::domain_error("non-invertible series");
    }
    const std::uint64_t m = a.mod_;
    const std::size_t width = a.c_.size();
    const std::uint64_t inv0 = invmod(a.c_[0], m);
    ResidueSeries r(a.p_, a.T_, -a.lead_, -a.lead_ + static_cast<long>(width));
    r.c_[0] = inv0;
    const std::uint64_t minus_inv0 = (m - inv0) % m;
    for (std::size_t n = 1; n < width; ++n) {
        unsigned __int128 acc = 0;
        for (std::size_t i = 1; i <= n; ++i) {
            if (a.c_[i] != 0) acc += mulmod(a.c_[i], r.c_[n - i], m);
        }
        r.c_[n] = mulmod(static_cast<std::uint64_t>(acc % m), minus_inv0, m);
    }
    return r;
}

ResidueSeries d_operator(const ResidueSeries& a, unsigned j) {
    ResidueSeries r = a;
    for (std::size_t i = 0; i < r.c_.size(); ++i) {
        if (r.c_[i] == 0) continue;
        const long n = a.lead_ + static_cast<long>(i);
        r.c_[i] = mulmod(r.c_[i], powmod(a.reduce(n), j, a.mod_), a.mod_);
    }
    return r;
}

}  // namespace shiftconv
