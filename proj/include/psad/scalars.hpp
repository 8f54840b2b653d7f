#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "psad/op_counter.hpp"

namespace psad {

// The four scalar realizations share one contract: identical primal value
// arithmetic (so plain, compressed, sparse, and second-order evaluations of
// the same component functions produce the same value sequence), plus the
// derivative bookkeeping specific to each mode. Component functions are
// written as templates against this common surface: +, -, *, / (scalar and
// double mixes), unary minus, value comparisons, and exp/log/sin/cos/sqrt/
// pow/abs.

// ---------------------------------------------------------------------------
// PlainValue: a counted double.
// ---------------------------------------------------------------------------

struct PlainValue {
    double value = 0.0;

    PlainValue() = default;
    PlainValue(double v) : value(v) {}
};

inline PlainValue operator+(const PlainValue& a, const PlainValue& b) {
    detail::tally_add(1);
    return {a.value + b.value};
}
inline PlainValue operator-(const PlainValue& a, const PlainValue& b) {
    detail::tally_add(1);
    return {a.value - b.value};
}
inline PlainValue operator-(const PlainValue& a) {
    detail::tally_add(1);
    return {-a.value};
}
inline PlainValue operator*(const PlainValue& a, const PlainValue& b) {
    detail::tally_mul(1);
    return {a.value * b.value};
}
inline PlainValue operator/(const PlainValue& a, const PlainValue& b) {
    detail::tally_div(1);
    return {a.value / b.value};
}

inline PlainValue operator+(const PlainValue& a, double b) { return a + PlainValue(b); }
inline PlainValue operator+(double a, const PlainValue& b) { return PlainValue(a) + b; }
inline PlainValue operator-(const PlainValue& a, double b) { return a - PlainValue(b); }
inline PlainValue operator-(double a, const PlainValue& b) { return PlainValue(a) - b; }
inline PlainValue operator*(const PlainValue& a, double b) { return a * PlainValue(b); }
inline PlainValue operator*(double a, const PlainValue& b) { return PlainValue(a) * b; }
inline PlainValue operator/(const PlainValue& a, double b) { return a / PlainValue(b); }
inline PlainValue operator/(double a, const PlainValue& b) { return PlainValue(a) / b; }

inline PlainValue exp(const PlainValue& a) {
    detail::tally_call(1);
    return {std::exp(a.value)};
}
inline PlainValue log(const PlainValue& a) {
    detail::tally_call(1);
    return {std::log(a.value)};
}
inline PlainValue sin(const PlainValue& a) {
    detail::tally_call(1);
    return {std::sin(a.value)};
}
inline PlainValue cos(const PlainValue& a) {
    detail::tally_call(1);
    return {std::cos(a.value)};
}
inline PlainValue sqrt(const PlainValue& a) {
    detail::tally_call(1);
    return {std::sqrt(a.value)};
}
inline PlainValue abs(const PlainValue& a) {
    detail::tally_call(1);
    return {std::fabs(a.value)};
}
inline PlainValue pow(const PlainValue& a, double y) {
    detail::tally_call(1);
    return {std::pow(a.value, y)};
}
inline PlainValue pow(const PlainValue& a, const PlainValue& b) {
    detail::tally_call(1);
    return {std::pow(a.value, b.value)};
}

// ---------------------------------------------------------------------------
// DualVector: value plus a dense block of directional derivatives. An empty
// derivative block stands for "all directions zero" (constants), so widths
// only meet when both operands carry seeds; they then must agree.
// ---------------------------------------------------------------------------

struct DualVector {
    double value = 0.0;
    std::vector<double> deriv;

    DualVector() = default;
    DualVector(double v) : value(v) {}
    DualVector(double v, std::vector<double> d) : value(v), deriv(std::move(d)) {}

    std::size_t width() const noexcept { return deriv.size(); }
};

namespace detail {

// out = fa*a + fb*b over dense blocks; empty blocks are zero.
inline std::vector<double> dense_combine(double fa, const std::vector<double>& a,
                                         double fb, const std::vector<double>& b) {
    if (a.empty() && b.empty()) return {};
    if (b.empty()) {
        std::vector<double> out(a.size());
        tally_mul(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) out[i] = fa * a[i];
        return out;
    }
    if (a.empty()) {
        std::vector<double> out(b.size());
        tally_mul(b.size());
        for (std::size_t i = 0; i < b.size(); ++i) out[i] = fb * b[i];
        return out;
    }
    std::vector<double> out(a.size());
    tally_mul(2 * a.size());
    tally_add(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = fa * a[i] + fb * b[i];
    return out;
}

inline std::vector<double> dense_scale(double f, const std::vector<double>& a) {
    std::vector<double> out(a.size());
    tally_mul(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = f * a[i];
    return out;
}

} // namespace detail

inline DualVector operator+(const DualVector& a, const DualVector& b) {
    detail::tally_add(1);
    DualVector out(a.value + b.value);
    if (a.deriv.empty()) {
        out.deriv = b.deriv;
    } else if (b.deriv.empty()) {
        out.deriv = a.deriv;
    } else {
        out.deriv.resize(a.deriv.size());
        detail::tally_add(a.deriv.size());
        for (std::size_t i = 0; i < a.deriv.size(); ++i) out.deriv[i] = a.deriv[i] + b.deriv[i];
    }
    return out;
}
inline DualVector operator-(const DualVector& a, const DualVector& b) {
    detail::tally_add(1);
    DualVector out(a.value - b.value);
    if (a.deriv.empty() && b.deriv.empty()) return out;
    if (b.deriv.empty()) {
        out.deriv = a.deriv;
    } else {
        out.deriv = detail::dense_combine(1.0, a.deriv, -1.0, b.deriv);
    }
    return out;
}
inline DualVector operator-(const DualVector& a) {
    detail::tally_add(1);
    DualVector out(-a.value);
    if (!a.deriv.empty()) out.deriv = detail::dense_scale(-1.0, a.deriv);
    return out;
}
inline DualVector operator*(const DualVector& a, const DualVector& b) {
    detail::tally_mul(1);
    DualVector out(a.value * b.value);
    out.deriv = detail::dense_combine(b.value, a.deriv, a.value, b.deriv);
    return out;
}
inline DualVector operator/(const DualVector& a, const DualVector& b) {
    detail::tally_div(1);
    DualVector out(a.value / b.value);
    if (a.deriv.empty() && b.deriv.empty()) return out;
    // d = (da - out*db) / bv
    const std::size_t p = a.deriv.empty() ? b.deriv.size() : a.deriv.size();
    out.deriv.resize(p);
    detail::tally_add(p);
    detail::tally_mul(p);
    detail::tally_div(p);
    for (std::size_t i = 0; i < p; ++i) {
        const double da = a.deriv.empty() ? 0.0 : a.deriv[i];
        const double db = b.deriv.empty() ? 0.0 : b.deriv[i];
        out.deriv[i] = (da - out.value * db) / b.value;
    }
    return out;
}

inline DualVector operator+(const DualVector& a, double b) { return a + DualVector(b); }
inline DualVector operator+(double a, const DualVector& b) { return DualVector(a) + b; }
inline DualVector operator-(const DualVector& a, double b) { return a - DualVector(b); }
inline DualVector operator-(double a, const DualVector& b) { return DualVector(a) - b; }
inline DualVector operator*(const DualVector& a, double b) { return a * DualVector(b); }
inline DualVector operator*(double a, const DualVector& b) { return DualVector(a) * b; }
inline DualVector operator/(const DualVector& a, double b) { return a / DualVector(b); }
inline DualVector operator/(double a, const DualVector& b) { return DualVector(a) / b; }

namespace detail {

// g(u) with derivative factor g1 = g'(u.value).
inline DualVector dual_chain(double value, double g1, const DualVector& u) {
    DualVector out(value);
    if (!u.deriv.empty()) out.deriv = dense_scale(g1, u.deriv);
    return out;
}

} // namespace detail

inline DualVector exp(const DualVector& a) {
    detail::tally_call(1);
    const double v = std::exp(a.value);
    return detail::dual_chain(v, v, a);
}
inline DualVector log(const DualVector& a) {
    detail::tally_call(1);
    detail::tally_div(1);
    return detail::dual_chain(std::log(a.value), 1.0 / a.value, a);
}
inline DualVector sin(const DualVector& a) {
    detail::tally_call(2);
    return detail::dual_chain(std::sin(a.value), std::cos(a.value), a);
}
inline DualVector cos(const DualVector& a) {
    detail::tally_call(2);
    return detail::dual_chain(std::cos(a.value), -std::sin(a.value), a);
}
inline DualVector sqrt(const DualVector& a) {
    detail::tally_call(1);
    detail::tally_div(1);
    const double v = std::sqrt(a.value);
    return detail::dual_chain(v, 0.5 / v, a);
}
inline DualVector abs(const DualVector& a) {
    detail::tally_call(1);
    // Differentiates the active branch at the evaluation point; x = 0 takes
    // the right branch.
    return detail::dual_chain(std::fabs(a.value), a.value < 0.0 ? -1.0 : 1.0, a);
}
inline DualVector pow(const DualVector& a, double y) {
    detail::tally_call(2);
    detail::tally_mul(1);
    return detail::dual_chain(std::pow(a.value, y), y * std::pow(a.value, y - 1.0), a);
}
inline DualVector pow(const DualVector& a, const DualVector& b) {
    detail::tally_call(3);
    detail::tally_mul(2);
    const double v = std::pow(a.value, b.value);
    const double du = b.value * std::pow(a.value, b.value - 1.0);
    const double dv = v * std::log(a.value);
    DualVector out(v);
    out.deriv = detail::dense_combine(du, a.deriv, dv, b.deriv);
    return out;
}
inline DualVector pow(double a, const DualVector& b) { return pow(DualVector(a), b); }

// ---------------------------------------------------------------------------
// SparseDual: value plus a sorted sparse derivative row. Entries are kept
// even when arithmetic cancels them to exact zero: presence records
// chain-rule reachability, which is what sparsity detection consumes.
// ---------------------------------------------------------------------------

struct SparseEntry {
    std::int32_t index;
    double value;
};

using SparseRow = std::vector<SparseEntry>;

struct SparseDual {
    double value = 0.0;
    SparseRow deriv; // strictly increasing indices

    SparseDual() = default;
    SparseDual(double v) : value(v) {}
    SparseDual(double v, SparseRow d) : value(v), deriv(std::move(d)) {}
};

namespace detail {

// fa*a + fb*b as a sorted union merge.
inline SparseRow sparse_combine(double fa, const SparseRow& a, double fb, const SparseRow& b) {
    if (a.empty() && b.empty()) return {};
    SparseRow out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    std::uint64_t muls = 0, adds = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].index < b[j].index) {
            out.push_back({a[i].index, fa * a[i].value});
            ++muls;
            ++i;
        } else if (b[j].index < a[i].index) {
            out.push_back({b[j].index, fb * b[j].value});
            ++muls;
            ++j;
        } else {
            out.push_back({a[i].index, fa * a[i].value + fb * b[j].value});
            muls += 2;
            ++adds;
            ++i;
            ++j;
        }
    }
    for (; i < a.size(); ++i) {
        out.push_back({a[i].index, fa * a[i].value});
        ++muls;
    }
    for (; j < b.size(); ++j) {
        out.push_back({b[j].index, fb * b[j].value});
        ++muls;
    }
    tally_mul(muls);
    tally_add(adds);
    return out;
}

// Pure addition merge (no scaling factors, no multiply tallies).
inline SparseRow sparse_add(const SparseRow& a, const SparseRow& b, double sb) {
    if (a.empty() && b.empty()) return {};
    SparseRow out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    std::uint64_t adds = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].index < b[j].index) {
            out.push_back(a[i++]);
        } else if (b[j].index < a[i].index) {
            out.push_back({b[j].index, sb * b[j].value});
            ++j;
        } else {
            out.push_back({a[i].index, a[i].value + sb * b[j].value});
            ++adds;
            ++i;
            ++j;
        }
    }
    for (; i < a.size(); ++i) out.push_back(a[i]);
    for (; j < b.size(); ++j) out.push_back({b[j].index, sb * b[j].value});
    if (sb != 1.0) tally_add(b.size());
    tally_add(adds);
    return out;
}

inline SparseRow sparse_scale(double f, const SparseRow& a) {
    SparseRow out(a.size());
    tally_mul(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = {a[i].index, f * a[i].value};
    return out;
}

} // namespace detail

inline SparseDual operator+(const SparseDual& a, const SparseDual& b) {
    detail::tally_add(1);
    return {a.value + b.value, detail::sparse_add(a.deriv, b.deriv, 1.0)};
}
inline SparseDual operator-(const SparseDual& a, const SparseDual& b) {
    detail::tally_add(1);
    return {a.value - b.value, detail::sparse_add(a.deriv, b.deriv, -1.0)};
}
inline SparseDual operator-(const SparseDual& a) {
    detail::tally_add(1);
    return {-a.value, detail::sparse_scale(-1.0, a.deriv)};
}
inline SparseDual operator*(const SparseDual& a, const SparseDual& b) {
    detail::tally_mul(1);
    SparseDual out(a.value * b.value);
    if (b.deriv.empty()) {
        out.deriv = detail::sparse_scale(b.value, a.deriv);
    } else if (a.deriv.empty()) {
        out.deriv = detail::sparse_scale(a.value, b.deriv);
    } else {
        out.deriv = detail::sparse_combine(b.value, a.deriv, a.value, b.deriv);
    }
    return out;
}
inline SparseDual operator/(const SparseDual& a, const SparseDual& b) {
    detail::tally_div(1);
    SparseDual out(a.value / b.value);
    if (b.deriv.empty()) {
        detail::tally_div(a.deriv.size());
        out.deriv.reserve(a.deriv.size());
        for (const auto& e : a.deriv) out.deriv.push_back({e.index, e.value / b.value});
    } else {
        // (da - out*db) / bv
        SparseRow num = a.deriv.empty() ? detail::sparse_scale(-out.value, b.deriv)
                                        : detail::sparse_combine(1.0, a.deriv, -out.value, b.deriv);
        detail::tally_div(num.size());
        for (auto& e : num) e.value /= b.value;
        out.deriv = std::move(num);
    }
    return out;
}

inline SparseDual operator+(const SparseDual& a, double b) { return a + SparseDual(b); }
inline SparseDual operator+(double a, const SparseDual& b) { return SparseDual(a) + b; }
inline SparseDual operator-(const SparseDual& a, double b) { return a - SparseDual(b); }
inline SparseDual operator-(double a, const SparseDual& b) { return SparseDual(a) - b; }
inline SparseDual operator*(const SparseDual& a, double b) { return a * SparseDual(b); }
inline SparseDual operator*(double a, const SparseDual& b) { return SparseDual(a) * b; }
inline SparseDual operator/(const SparseDual& a, double b) { return a / SparseDual(b); }
inline SparseDual operator/(double a, const SparseDual& b) { return SparseDual(a) / b; }

inline SparseDual exp(const SparseDual& a) {
    detail::tally_call(1);
    const double v = std::exp(a.value);
    return {v, detail::sparse_scale(v, a.deriv)};
}
inline SparseDual log(const SparseDual& a) {
    detail::tally_call(1);
    detail::tally_div(1);
    return {std::log(a.value), detail::sparse_scale(1.0 / a.value, a.deriv)};
}
inline SparseDual sin(const SparseDual& a) {
    detail::tally_call(2);
    return {std::sin(a.value), detail::sparse_scale(std::cos(a.value), a.deriv)};
}
inline SparseDual cos(const SparseDual& a) {
    detail::tally_call(2);
    return {std::cos(a.value), detail::sparse_scale(-std::sin(a.value), a.deriv)};
}
inline SparseDual sqrt(const SparseDual& a) {
    detail::tally_call(1);
    detail::tally_div(1);
    const double v = std::sqrt(a.value);
    return {v, detail::sparse_scale(0.5 / v, a.deriv)};
}
inline SparseDual abs(const SparseDual& a) {
    detail::tally_call(1);
    return {std::fabs(a.value), detail::sparse_scale(a.value < 0.0 ? -1.0 : 1.0, a.deriv)};
}
inline SparseDual pow(const SparseDual& a, double y) {
    detail::tally_call(2);
    detail::tally_mul(1);
    return {std::pow(a.value, y), detail::sparse_scale(y * std::pow(a.value, y - 1.0), a.deriv)};
}
inline SparseDual pow(const SparseDual& a, const SparseDual& b) {
    detail::tally_call(3);
    detail::tally_mul(2);
    const double v = std::pow(a.value, b.value);
    const double du = b.value * std::pow(a.value, b.value - 1.0);
    const double dv = v * std::log(a.value);
    SparseDual out(v);
    if (b.deriv.empty()) {
        out.deriv = detail::sparse_scale(du, a.deriv);
    } else if (a.deriv.empty()) {
        out.deriv = detail::sparse_scale(dv, b.deriv);
    } else {
        out.deriv = detail::sparse_combine(du, a.deriv, dv, b.deriv);
    }
    return out;
}
inline SparseDual pow(double a, const SparseDual& b) { return pow(SparseDual(a), b); }

// ---------------------------------------------------------------------------
// SecondOrderDual: value, p directional first derivatives, one extra
// directional derivative ("dot"), and the p mixed second derivatives of the
// dot direction against the p first directions. One sweep over the extended
// function yields per-component rows of J·U, J·v, and vᵀ∇²f_k·U.
// ---------------------------------------------------------------------------

struct SecondOrderDual {
    double value = 0.0;
    std::vector<double> first;
    double dot = 0.0;
    std::vector<double> second;

    SecondOrderDual() = default;
    SecondOrderDual(double v) : value(v) {}
    SecondOrderDual(double v, std::vector<double> f, double d, std::vector<double> s)
        : value(v), first(std::move(f)), dot(d), second(std::move(s)) {}
};

namespace detail {

inline std::vector<double> dense_add(const std::vector<double>& a, const std::vector<double>& b,
                                     double sb) {
    if (a.empty() && b.empty()) return {};
    if (a.empty()) {
        if (sb == 1.0) return b;
        return dense_scale(sb, b);
    }
    if (b.empty()) return a;
    std::vector<double> out(a.size() >= b.size() ? a.size() : b.size());
    tally_add(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double av = i < a.size() ? a[i] : 0.0;
        const double bv = i < b.size() ? b[i] : 0.0;
        out[i] = sb == 1.0 ? av + bv : av - bv;
    }
    return out;
}

inline SecondOrderDual sod_add(const SecondOrderDual& a, const SecondOrderDual& b, double sb) {
    tally_add(2);
    SecondOrderDual out(sb == 1.0 ? a.value + b.value : a.value - b.value);
    out.dot = sb == 1.0 ? a.dot + b.dot : a.dot - b.dot;
    out.first = dense_add(a.first, b.first, sb);
    out.second = dense_add(a.second, b.second, sb);
    return out;
}

} // namespace detail

inline SecondOrderDual operator+(const SecondOrderDual& a, const SecondOrderDual& b) {
    return detail::sod_add(a, b, 1.0);
}
inline SecondOrderDual operator-(const SecondOrderDual& a, const SecondOrderDual& b) {
    return detail::sod_add(a, b, -1.0);
}
inline SecondOrderDual operator-(const SecondOrderDual& a) {
    detail::tally_add(2);
    SecondOrderDual out(-a.value);
    out.dot = -a.dot;
    out.first = detail::dense_scale(-1.0, a.first);
    out.second = detail::dense_scale(-1.0, a.second);
    return out;
}
inline SecondOrderDual operator*(const SecondOrderDual& a, const SecondOrderDual& b) {
    detail::tally_mul(3);
    detail::tally_add(1);
    SecondOrderDual out(a.value * b.value);
    out.dot = a.dot * b.value + a.value * b.dot;
    out.first = detail::dense_combine(b.value, a.first, a.value, b.first);
    // d/dθ_c (a.dot b + a b.dot)
    const std::size_t p = std::max(std::max(a.first.size(), b.first.size()),
                                   std::max(a.second.size(), b.second.size()));
    if (p > 0) {
        out.second.resize(p);
        detail::tally_mul(4 * p);
        detail::tally_add(3 * p);
        for (std::size_t c = 0; c < p; ++c) {
            const double af = c < a.first.size() ? a.first[c] : 0.0;
            const double bf = c < b.first.size() ? b.first[c] : 0.0;
            const double as = c < a.second.size() ? a.second[c] : 0.0;
            const double bs = c < b.second.size() ? b.second[c] : 0.0;
            out.second[c] = as * b.value + af * b.dot + a.dot * bf + a.value * bs;
        }
    }
    return out;
}
inline SecondOrderDual operator/(const SecondOrderDual& a, const SecondOrderDual& b) {
    detail::tally_div(2);
    detail::tally_mul(1);
    detail::tally_add(1);
    SecondOrderDual out(a.value / b.value);
    out.dot = (a.dot - out.value * b.dot) / b.value;
    const std::size_t p = std::max(std::max(a.first.size(), b.first.size()),
                                   std::max(a.second.size(), b.second.size()));
    if (p > 0) {
        out.first.resize(p);
        out.second.resize(p);
        detail::tally_mul(4 * p);
        detail::tally_add(5 * p);
        detail::tally_div(2 * p);
        for (std::size_t c = 0; c < p; ++c) {
            const double af = c < a.first.size() ? a.first[c] : 0.0;
            const double bf = c < b.first.size() ? b.first[c] : 0.0;
            const double as = c < a.second.size() ? a.second[c] : 0.0;
            const double bs = c < b.second.size() ? b.second[c] : 0.0;
            const double zf = (af - out.value * bf) / b.value;
            out.first[c] = zf;
            out.second[c] = (as - zf * b.dot - out.value * bs - out.dot * bf) / b.value;
        }
    }
    return out;
}

inline SecondOrderDual operator+(const SecondOrderDual& a, double b) { return a + SecondOrderDual(b); }
inline SecondOrderDual operator+(double a, const SecondOrderDual& b) { return SecondOrderDual(a) + b; }
inline SecondOrderDual operator-(const SecondOrderDual& a, double b) { return a - SecondOrderDual(b); }
inline SecondOrderDual operator-(double a, const SecondOrderDual& b) { return SecondOrderDual(a) - b; }
inline SecondOrderDual operator*(const SecondOrderDual& a, double b) { return a * SecondOrderDual(b); }
inline SecondOrderDual operator*(double a, const SecondOrderDual& b) { return SecondOrderDual(a) * b; }
inline SecondOrderDual operator/(const SecondOrderDual& a, double b) { return a / SecondOrderDual(b); }
inline SecondOrderDual operator/(double a, const SecondOrderDual& b) { return SecondOrderDual(a) / b; }

namespace detail {

// g(u) with g1 = g'(u.value), g2 = g''(u.value):
//   first_c  = g1 u.first_c
//   dot      = g1 u.dot
//   second_c = g1 u.second_c + g2 u.dot u.first_c
inline SecondOrderDual sod_chain(double value, double g1, double g2, const SecondOrderDual& u) {
    SecondOrderDual out(value);
    tally_mul(1);
    out.dot = g1 * u.dot;
    out.first = dense_scale(g1, u.first);
    const std::size_t p = std::max(u.first.size(), u.second.size());
    if (p > 0) {
        out.second.resize(p);
        const double g2dot = g2 * u.dot;
        tally_mul(1 + 2 * p);
        tally_add(p);
        for (std::size_t c = 0; c < p; ++c) {
            const double uf = c < u.first.size() ? u.first[c] : 0.0;
            const double us = c < u.second.size() ? u.second[c] : 0.0;
            out.second[c] = g1 * us + g2dot * uf;
        }
    }
    return out;
}

} // namespace detail

inline SecondOrderDual exp(const SecondOrderDual& a) {
    detail::tally_call(1);
    const double v = std::exp(a.value);
    return detail::sod_chain(v, v, v, a);
}
inline SecondOrderDual log(const SecondOrderDual& a) {
    detail::tally_call(1);
    detail::tally_div(2);
    const double g1 = 1.0 / a.value;
    return detail::sod_chain(std::log(a.value), g1, -g1 * g1, a);
}
inline SecondOrderDual sin(const SecondOrderDual& a) {
    detail::tally_call(2);
    const double s = std::sin(a.value);
    return detail::sod_chain(s, std::cos(a.value), -s, a);
}
inline SecondOrderDual cos(const SecondOrderDual& a) {
    detail::tally_call(2);
    const double c = std::cos(a.value);
    return detail::sod_chain(c, -std::sin(a.value), -c, a);
}
inline SecondOrderDual sqrt(const SecondOrderDual& a) {
    detail::tally_call(1);
    detail::tally_div(2);
    const double v = std::sqrt(a.value);
    const double g1 = 0.5 / v;
    return detail::sod_chain(v, g1, -0.5 * g1 / a.value, a);
}
inline SecondOrderDual abs(const SecondOrderDual& a) {
    detail::tally_call(1);
    const double s = a.value < 0.0 ? -1.0 : 1.0;
    return detail::sod_chain(std::fabs(a.value), s, 0.0, a);
}
inline SecondOrderDual pow(const SecondOrderDual& a, double y) {
    detail::tally_call(3);
    detail::tally_mul(3);
    const double g1 = y * std::pow(a.value, y - 1.0);
    const double g2 = y * (y - 1.0) * std::pow(a.value, y - 2.0);
    return detail::sod_chain(std::pow(a.value, y), g1, g2, a);
}
inline SecondOrderDual pow(const SecondOrderDual& a, const SecondOrderDual& b) {
    // z = a^b with full second-order bookkeeping via the partials
    //   z_a = b a^(b-1),  z_b = z ln a,
    //   z_aa = b(b-1)a^(b-2), z_ab = a^(b-1)(1 + b ln a), z_bb = z (ln a)^2.
    detail::tally_call(4);
    detail::tally_mul(8);
    detail::tally_add(1);
    const double v = std::pow(a.value, b.value);
    const double lna = std::log(a.value);
    const double apbm1 = std::pow(a.value, b.value - 1.0);
    const double za = b.value * apbm1;
    const double zb = v * lna;
    const double zaa = b.value * (b.value - 1.0) * std::pow(a.value, b.value - 2.0);
    const double zab = apbm1 * (1.0 + b.value * lna);
    const double zbb = zb * lna;
    SecondOrderDual out(v);
    detail::tally_mul(2);
    detail::tally_add(1);
    out.dot = za * a.dot + zb * b.dot;
    out.first = detail::dense_combine(za, a.first, zb, b.first);
    const std::size_t p = std::max(std::max(a.first.size(), b.first.size()),
                                   std::max(a.second.size(), b.second.size()));
    if (p > 0) {
        out.second.resize(p);
        detail::tally_mul(8 * p);
        detail::tally_add(5 * p);
        for (std::size_t c = 0; c < p; ++c) {
            const double af = c < a.first.size() ? a.first[c] : 0.0;
            const double bf = c < b.first.size() ? b.first[c] : 0.0;
            const double as = c < a.second.size() ? a.second[c] : 0.0;
            const double bs = c < b.second.size() ? b.second[c] : 0.0;
            out.second[c] = zaa * a.dot * af + zab * (a.dot * bf + b.dot * af) +
                            zbb * b.dot * bf + za * as + zb * bs;
        }
    }
    return out;
}
inline SecondOrderDual pow(double a, const SecondOrderDual& b) { return pow(SecondOrderDual(a), b); }

// ---------------------------------------------------------------------------
// Value access and comparisons (always on primal values).
// ---------------------------------------------------------------------------

inline double value_of(double s) noexcept { return s; }
inline double value_of(const PlainValue& s) noexcept { return s.value; }
inline double value_of(const DualVector& s) noexcept { return s.value; }
inline double value_of(const SparseDual& s) noexcept { return s.value; }
inline double value_of(const SecondOrderDual& s) noexcept { return s.value; }

#define PSAD_DEFINE_COMPARISONS(T)                                                      \
    inline bool operator<(const T& a, const T& b) { return a.value < b.value; }         \
    inline bool operator>(const T& a, const T& b) { return a.value > b.value; }         \
    inline bool operator<=(const T& a, const T& b) { return a.value <= b.value; }       \
    inline bool operator>=(const T& a, const T& b) { return a.value >= b.value; }       \
    inline bool operator<(const T& a, double b) { return a.value < b; }                 \
    inline bool operator>(const T& a, double b) { return a.value > b; }                 \
    inline bool operator<=(const T& a, double b) { return a.value <= b; }               \
    inline bool operator>=(const T& a, double b) { return a.value >= b; }               \
    inline bool operator<(double a, const T& b) { return a < b.value; }                 \
    inline bool operator>(double a, const T& b) { return a > b.value; }                 \
    inline bool operator<=(double a, const T& b) { return a <= b.value; }               \
    inline bool operator>=(double a, const T& b) { return a >= b.value; }

PSAD_DEFINE_COMPARISONS(PlainValue)
PSAD_DEFINE_COMPARISONS(DualVector)
PSAD_DEFINE_COMPARISONS(SparseDual)
PSAD_DEFINE_COMPARISONS(SecondOrderDual)

#undef PSAD_DEFINE_COMPARISONS

} // namespace psad
