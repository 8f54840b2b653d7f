#include "psad/adcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "psad/errors.hpp"

namespace psad {

namespace detail {

OpCounter*& active_counter() noexcept {
    thread_local OpCounter* counter = nullptr;
    return counter;
}

namespace {

void check_length(const ExtendedFunction& F, std::span<const double> x) {
    if (static_cast<int>(x.size()) != F.n())
        throw std::invalid_argument("point length " + std::to_string(x.size()) +
                                    " does not match n = " + std::to_string(F.n()));
}

} // namespace
} // namespace detail

std::vector<double> eval_components(const ExtendedFunction& F, std::span<const double> x,
                                    OpCounter* ops) {
    detail::check_length(F, x);
    std::vector<PlainValue> xs(x.begin(), x.end());
    std::vector<PlainValue> out;
    {
        CountingScope scope(ops);
        F.evaluate<PlainValue>(xs, out);
    }
    std::vector<double> values(out.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        values[k] = out[k].value;
        if (!std::isfinite(values[k]))
            throw domain_error("component " + std::to_string(k) + " evaluated to a non-finite value",
                               static_cast<int>(k));
    }
    return values;
}

double eval_function_value(const ExtendedFunction& F, std::span<const double> x, OpCounter* ops) {
    const std::vector<double> components = eval_components(F, x, ops);
    double sum = 0.0;
    for (double v : components) sum += v;
    if (ops && !components.empty()) ops->adds += components.size() - 1;
    return sum;
}

CompressedMatrix eval_compressed_jacobian(const ExtendedFunction& F, std::span<const double> x,
                                          const Matrix& V, OpCounter* ops) {
    detail::check_length(F, x);
    if (V.rows() != F.n()) throw std::invalid_argument("seed matrix must have n rows");
    if (V.cols() < 1) throw std::invalid_argument("seed matrix needs at least one column");
    const int p = V.cols();

    std::vector<DualVector> xs(F.n());
    for (int j = 0; j < F.n(); ++j) {
        xs[j].value = x[j];
        xs[j].deriv.resize(p);
        for (int k = 0; k < p; ++k) xs[j].deriv[k] = V(j, k);
    }
    std::vector<DualVector> out;
    {
        CountingScope scope(ops);
        F.evaluate<DualVector>(xs, out);
    }

    CompressedMatrix B(static_cast<int>(out.size()), p);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!std::isfinite(out[i].value))
            throw domain_error("component " + std::to_string(i) + " evaluated to a non-finite value",
                               static_cast<int>(i));
        for (int k = 0; k < p; ++k) {
            const double d = out[i].deriv.empty() ? 0.0 : out[i].deriv[k];
            if (!std::isfinite(d))
                throw domain_error("non-finite derivative in component " + std::to_string(i) +
                                       ", group " + std::to_string(k + 1),
                                   static_cast<int>(i), k + 1);
            B(static_cast<int>(i), k) = d;
        }
    }
    return B;
}

SparseJacobian eval_sparse_jacobian(const ExtendedFunction& F, std::span<const double> x,
                                    OpCounter* ops) {
    detail::check_length(F, x);
    std::vector<SparseDual> xs(F.n());
    for (int j = 0; j < F.n(); ++j) {
        xs[j].value = x[j];
        xs[j].deriv = {{static_cast<std::int32_t>(j), 1.0}};
    }
    std::vector<SparseDual> out;
    {
        CountingScope scope(ops);
        F.evaluate<SparseDual>(xs, out);
    }

    std::vector<std::int32_t> offsets;
    offsets.reserve(out.size() + 1);
    offsets.push_back(0);
    std::vector<std::int32_t> indices;
    std::vector<double> values;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!std::isfinite(out[i].value))
            throw domain_error("component " + std::to_string(i) + " evaluated to a non-finite value",
                               static_cast<int>(i));
        for (const SparseEntry& e : out[i].deriv) {
            if (!std::isfinite(e.value))
                throw domain_error("non-finite derivative in component " + std::to_string(i),
                                   static_cast<int>(i));
            indices.push_back(e.index);
            values.push_back(e.value);
        }
        offsets.push_back(static_cast<std::int32_t>(indices.size()));
    }
    SparseJacobian J;
    J.pattern = SparsityPattern(static_cast<int>(out.size()), F.n(), std::move(offsets),
                                std::move(indices));
    J.values = std::move(values);
    return J;
}

std::vector<SecondOrderDual> eval_second_order(const ExtendedFunction& F,
                                               std::span<const double> x, const Matrix& U,
                                               std::span<const double> v, OpCounter* ops) {
    detail::check_length(F, x);
    if (U.rows() != F.n()) throw std::invalid_argument("first-order seed must have n rows");
    if (static_cast<int>(v.size()) != F.n())
        throw std::invalid_argument("dot direction length does not match n");
    const int p = U.cols();

    std::vector<SecondOrderDual> xs(F.n());
    for (int j = 0; j < F.n(); ++j) {
        xs[j].value = x[j];
        xs[j].dot = v[j];
        xs[j].first.resize(p);
        for (int k = 0; k < p; ++k) xs[j].first[k] = U(j, k);
        xs[j].second.assign(p, 0.0);
    }
    std::vector<SecondOrderDual> out;
    {
        CountingScope scope(ops);
        F.evaluate<SecondOrderDual>(xs, out);
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!std::isfinite(out[i].value))
            throw domain_error("component " + std::to_string(i) + " evaluated to a non-finite value",
                               static_cast<int>(i));
        if (!std::isfinite(out[i].dot))
            throw domain_error("non-finite directional derivative in component " + std::to_string(i),
                               static_cast<int>(i));
    }
    return out;
}

double default_difference_step(std::span<const double> x) {
    double xmax = 0.0;
    for (double xi : x) xmax = std::max(xmax, std::fabs(xi));
    return std::sqrt(std::numeric_limits<double>::epsilon()) * (1.0 + xmax);
}

namespace {

// Gradient by one sparse sweep and column accumulation (Σ over rows).
std::vector<double> sparse_gradient(const ExtendedFunction& F, std::span<const double> x,
                                    OpCounter* ops) {
    const SparseJacobian J = eval_sparse_jacobian(F, x, ops);
    std::vector<double> g(F.n(), 0.0);
    const auto& idx = J.pattern.col_indices();
    for (std::size_t k = 0; k < idx.size(); ++k) g[idx[k]] += J.values[k];
    if (ops) ops->adds += idx.size();
    return g;
}

} // namespace

std::vector<double> eval_hessian_vector(const ExtendedFunction& F, std::span<const double> x,
                                        std::span<const double> v, HvpMode mode,
                                        std::optional<double> step, OpCounter* ops) {
    detail::check_length(F, x);
    if (static_cast<int>(v.size()) != F.n())
        throw std::invalid_argument("direction length does not match n");

    if (mode == HvpMode::exact) {
        const Matrix I = Matrix::identity(F.n());
        const std::vector<SecondOrderDual> rows = eval_second_order(F, x, I, v, ops);
        std::vector<double> result(F.n(), 0.0);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& s = rows[i].second;
            for (std::size_t j = 0; j < s.size(); ++j) {
                if (!std::isfinite(s[j]))
                    throw domain_error("non-finite second derivative in component " +
                                           std::to_string(i),
                                       static_cast<int>(i));
                result[j] += s[j];
            }
        }
        if (ops) ops->adds += rows.size() * F.n();
        return result;
    }

    double norm = 0.0;
    for (double vi : v) norm += vi * vi;
    norm = std::sqrt(norm);
    if (norm == 0.0) throw std::invalid_argument("difference mode requires a nonzero direction");
    double h;
    if (step) {
        if (*step <= 0.0) throw std::invalid_argument("difference step must be positive");
        h = *step;
    } else {
        h = default_difference_step(x);
    }

    std::vector<double> shifted(x.begin(), x.end());
    for (int j = 0; j < F.n(); ++j) shifted[j] += h * (v[j] / norm);
    const std::vector<double> g0 = sparse_gradient(F, x, ops);
    const std::vector<double> g1 = sparse_gradient(F, shifted, ops);
    std::vector<double> result(F.n());
    const double scale = norm / h;
    for (int j = 0; j < F.n(); ++j) result[j] = scale * (g1[j] - g0[j]);
    return result;
}

CompressedMatrix eval_compressed_hessian(const ExtendedFunction& F, std::span<const double> x,
                                         const Matrix& V, HvpMode mode, std::optional<double> step,
                                         OpCounter* ops) {
    detail::check_length(F, x);
    if (V.rows() != F.n()) throw std::invalid_argument("seed matrix must have n rows");
    CompressedMatrix W(F.n(), V.cols());
    std::vector<double> column(F.n());
    for (int k = 0; k < V.cols(); ++k) {
        for (int j = 0; j < F.n(); ++j) column[j] = V(j, k);
        try {
            const std::vector<double> w = eval_hessian_vector(F, x, column, mode, step, ops);
            for (int j = 0; j < F.n(); ++j) W(j, k) = w[j];
        } catch (const domain_error& e) {
            throw domain_error(std::string(e.what()) + " (seed group " + std::to_string(k + 1) + ")",
                               e.component(), k + 1);
        }
    }
    return W;
}

} // namespace psad
