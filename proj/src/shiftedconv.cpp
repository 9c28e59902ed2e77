#include "shiftconv/shiftedconv.hpp"

#include "shiftconv/modularforms.hpp"
#include "shiftconv/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace shiftconv {

double GenFunctionAssembly::coefficient(long h) const {
    if (h < 0 || h >= window) throw std::out_of_range("exponent " + std::to_string(h) + " outside the window");
    return L[static_cast<std::size_t>(h)];
}

ExactPieces exact_pieces(long window) {
    if (window < 2) throw std::invalid_argument("window must be at least 2");
    ExactPieces p;
    p.f = newform_f(window + 1);
    // L_f = -E_m with k = 4; m is needed up to window - 1.
    p.L_f = -eichler_integral(weakform_m9(window - 1), 4);
    p.fLf = (p.f * p.L_f).truncated(window);
    return p;
}

GenFunctionAssembly assemble(double beta, double gamma, double delta, long window, double support_tol,
                             double const_tol) {
    return assemble(beta, gamma, delta, exact_pieces(window), support_tol, const_tol);
}

GenFunctionAssembly assemble(double beta, double gamma, double delta, const ExactPieces& pieces,
                             double support_tol, double const_tol) {
    if (beta == 0.0 || !std::isfinite(beta)) throw std::invalid_argument("beta must be nonzero and finite");
    GenFunctionAssembly a;
    a.beta = beta;
    a.gamma = gamma;
    a.delta = delta;
    a.window = pieces.fLf.trunc_order();
    a.f = pieces.f;
    a.L_f = pieces.L_f;
    a.fLf = pieces.fLf;

    const auto A = sigma_series_A(a.window);
    const auto B = sigma_series_B(a.window);
    a.Q_f.resize(static_cast<std::size_t>(a.window));
    a.L.resize(static_cast<std::size_t>(a.window));
    for (long h = 0; h < a.window; ++h) {
        const auto i = static_cast<std::size_t>(h);
        a.Q_f[i] = gamma * A.coefficient(h).get_d() + delta * B.coefficient(h).get_d();
        a.L[i] = a.fLf.coefficient(h).get_d() / beta + a.Q_f[i];
    }
    for (long h = 1; h < a.window; ++h) {
        if (h % 3 != 0 && std::fabs(a.L[static_cast<std::size_t>(h)]) > support_tol) {
            throw std::runtime_error("nonzero coefficient at exponent " + std::to_string(h) +
                                     " not divisible by 3");
        }
    }
    if (std::fabs(a.L[0]) > const_tol) {
        throw std::runtime_error("constant term " + std::to_string(a.L[0]) + " does not vanish (exponent 0)");
    }
    return a;
}

namespace {

struct AnchorRow {
    double A;
    double B;
    double rhs;
};

std::vector<AnchorRow> anchor_rows(double beta, const std::vector<Anchor>& anchors, long window) {
    if (beta == 0.0) throw std::invalid_argument("beta must be nonzero");
    long top = 0;
    for (const auto& an : anchors) {
        if (an.h < 1) throw std::invalid_argument("anchor exponent must be positive");
        top = std::max(top, an.h);
    }
    if (top >= window) throw std::out_of_range("anchor exponent outside the window");
    const auto pieces = exact_pieces(top + 1);
    const auto A = sigma_series_A(top + 1);
    const auto B = sigma_series_B(top + 1);
    std::vector<AnchorRow> rows;
    for (const auto& an : anchors) {
        rows.push_back({A.coefficient(an.h).get_d(), B.coefficient(an.h).get_d(),
                        an.value - pieces.fLf.coefficient(an.h).get_d() / beta});
    }
    return rows;
}

}  // namespace

std::pair<double, double> fit_gamma_delta(double beta, const std::vector<Anchor>& anchors, long window) {
    if (anchors.size() != 2) throw std::invalid_argument("exactly two anchors are required");
    const auto rows = anchor_rows(beta, anchors, window);
    const double det = rows[0].A * rows[1].B - rows[0].B * rows[1].A;
    const double scale = std::max({std::fabs(rows[0].A * rows[1].B), std::fabs(rows[0].B * rows[1].A), 1.0});
    if (std::fabs(det) <= 1e-12 * scale) throw std::runtime_error("anchor exponents do not separate the basis");
    const double gamma = (rows[0].rhs * rows[1].B - rows[0].B * rows[1].rhs) / det;
    const double delta = (rows[0].A * rows[1].rhs - rows[0].rhs * rows[1].A) / det;
    return {gamma, delta};
}

std::pair<double, double> fit_gamma_delta_constrained(double beta, const std::vector<Anchor>& anchors, long window) {
    if (anchors.empty()) throw std::invalid_argument("at least one anchor is required");
    const auto rows = anchor_rows(beta, anchors, window);
    // delta = -1/beta - gamma turns each row into gamma (A - B) = rhs + B / beta.
    double num = 0.0;
    double den = 0.0;
    for (const auto& r : rows) {
        const double a = r.A - r.B;
        num += a * (r.rhs + r.B / beta);
        den += a * a;
    }
    if (den == 0.0) throw std::runtime_error("anchor exponents do not separate the basis");
    const double gamma = num / den;
    return {gamma, -1.0 / beta - gamma};
}

std::string to_string(ShiftedMethod m) { return m == ShiftedMethod::ClosedForm ? "closed_form" : "oracle"; }

ShiftedValue dhat(const GenFunctionAssembly& assembly, long h) {
    if (h < 1 || h >= assembly.window) {
        throw std::out_of_range("h = " + std::to_string(h) + " outside [1, " + std::to_string(assembly.window) + ")");
    }
    ShiftedValue v;
    v.h = h;
    v.value = assembly.coefficient(h);
    v.method = ShiftedMethod::ClosedForm;
    return v;
}

namespace {

ShiftedValue oracle_one(const std::vector<std::int64_t>& a, long h, long X, int depth) {
    if (h < 1) throw std::invalid_argument("h must be positive");
    std::vector<long double> stage(static_cast<std::size_t>(X + 1));
    long double s = 0.0L;
    for (long n = 1; n <= X; ++n) {
        const auto an = a[static_cast<std::size_t>(n)];
        const auto anh = a[static_cast<std::size_t>(n + h)];
        if (an != 0 && anh != 0) {
            const long double nl = static_cast<long double>(n);
            const long double nh = static_cast<long double>(n + h);
            s += static_cast<long double>(an) * static_cast<long double>(anh) *
                 (1.0L / (nl * nl * nl) - 1.0L / (nh * nh * nh));
        }
        stage[static_cast<std::size_t>(n)] = s;
    }
    ShiftedValue v;
    v.h = h;
    v.method = ShiftedMethod::Oracle;
    auto band = [&](const std::vector<long double>& st) {
        long double lo = std::numeric_limits<long double>::infinity();
        long double hi = -lo;
        for (long n = 3 * X / 4 + 1; n <= X; ++n) {
            lo = std::min(lo, st[static_cast<std::size_t>(n)]);
            hi = std::max(hi, st[static_cast<std::size_t>(n)]);
        }
        return static_cast<double>(hi - lo);
    };
    v.stage_bands.push_back(band(stage));
    std::vector<long double> prefix(static_cast<std::size_t>(X + 1));
    for (int j = 0; j < depth; ++j) {
        for (long n = 1; n <= X; ++n) {
            prefix[static_cast<std::size_t>(n)] = prefix[static_cast<std::size_t>(n - 1)] + stage[static_cast<std::size_t>(n)];
        }
        std::vector<long double> next(static_cast<std::size_t>(X + 1));
        for (long n = 1; n <= X; ++n) {
            const long lo = n / 2;
            next[static_cast<std::size_t>(n)] =
                (prefix[static_cast<std::size_t>(n)] - prefix[static_cast<std::size_t>(lo)]) / static_cast<long double>(n - lo);
        }
        stage = std::move(next);
        v.stage_bands.push_back(band(stage));
    }
    v.value = static_cast<double>(stage[static_cast<std::size_t>(X)]);
    v.oscillation_band = v.stage_bands.back();
    return v;
}

}  // namespace

std::vector<ShiftedValue> oracle_dhat(const std::vector<long>& hs, long X, int depth) {
    if (X < 4) throw std::invalid_argument("X must be at least 4");
    if (depth < 0) throw std::invalid_argument("averaging depth must be nonnegative");
    long hmax = 0;
    for (long h : hs) hmax = std::max(hmax, h);
    const auto a = newform_coefficients(X + hmax + 1);
    std::vector<ShiftedValue> out;
    for (long h : hs) out.push_back(oracle_one(a, h, X, depth));
    return out;
}

ShiftedValue oracle_dhat(long h, long X, int depth) { return oracle_dhat(std::vector<long>{h}, X, depth).front(); }

nlohmann::json to_json(const GenFunctionAssembly& a) {
    nlohmann::json L = nlohmann::json::array();
    nlohmann::json Q = nlohmann::json::array();
    for (long h = 0; h < a.window; ++h) {
        const auto i = static_cast<std::size_t>(h);
        if (a.L[i] != 0.0) L.push_back({h, float_json(a.L[i])});
        if (a.Q_f[i] != 0.0) Q.push_back({h, float_json(a.Q_f[i])});
    }
    return {{"beta", float_json(a.beta)},
            {"gamma", float_json(a.gamma)},
            {"delta", float_json(a.delta)},
            {"window", a.window},
            {"f", to_json(a.f)},
            {"L_f", to_json(a.L_f)},
            {"fLf", to_json(a.fLf)},
            {"Q_f", Q},
            {"L", L}};
}

nlohmann::json to_json(const ShiftedValue& v) {
    nlohmann::json j = {{"h", v.h}, {"value", float_json(v.value)}, {"method", to_string(v.method)}};
    if (v.method == ShiftedMethod::Oracle) {
        j["oscillation_band"] = float_json(v.oscillation_band);
        j["stage_bands"] = v.stage_bands;
    }
    return j;
}

std::string lvalues_csv(const std::vector<ShiftedValue>& closed, const std::vector<ShiftedValue>& oracle) {
    std::ostringstream out;
    out << "h,dhat_closed,dhat_oracle,oscillation_band\n";
    char buf[64];
    for (const auto& c : closed) {
        out << c.h << ',';
        std::snprintf(buf, sizeof buf, "%.6f", c.value);
        out << buf << ',';
        const auto it = std::find_if(oracle.begin(), oracle.end(), [&](const ShiftedValue& o) { return o.h == c.h; });
        if (it != oracle.end()) {
            std::snprintf(buf, sizeof buf, "%.6f", it->value);
            out << buf << ',';
            std::snprintf(buf, sizeof buf, "%.6f", it->oscillation_band);
            out << buf;
        } else {
            out << ',';
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace shiftconv
