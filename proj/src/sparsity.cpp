#include "psad/sparsity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "psad/adcore.hpp"
#include "psad/rng.hpp"

namespace psad {

namespace {

constexpr double kEpsLo = 1e-6;
constexpr double kEpsHi = 1e-4;

double bound_or(std::span<const double> b, int i, double fallback) {
    return b.empty() ? fallback : b[i];
}

} // namespace

PerturbedPoint perturb_point(std::span<const double> x0, std::span<const double> lower,
                             std::span<const double> upper, std::uint64_t seed) {
    const int n = static_cast<int>(x0.size());
    if (!lower.empty() && static_cast<int>(lower.size()) != n)
        throw std::invalid_argument("lower bound length does not match point");
    if (!upper.empty() && static_cast<int>(upper.size()) != n)
        throw std::invalid_argument("upper bound length does not match point");

    const double inf = std::numeric_limits<double>::infinity();
    Rng rng(seed);
    PerturbedPoint result;
    result.point.assign(x0.begin(), x0.end());

    for (int i = 0; i < n; ++i) {
        const double lo = bound_or(lower, i, -inf);
        const double hi = bound_or(upper, i, inf);
        if (x0[i] < lo || x0[i] > hi)
            throw std::invalid_argument("point is outside the bounds at component " +
                                        std::to_string(i));
        if (lo == hi) continue; // fixed variable, never perturbed

        const double mag = rng.uniform(kEpsLo, kEpsHi);
        const double s0 = rng.coin() ? 1.0 : -1.0;
        bool placed = false;
        for (double sign : {s0, -s0}) {
            const double eps = sign * mag;
            double cand = (1.0 + eps) * x0[i] + eps;
            if (cand == x0[i]) cand = x0[i] + eps; // relative formula degenerates near x = -1
            if (cand >= lo && cand <= hi && cand != x0[i]) {
                result.point[i] = cand;
                placed = true;
                break;
            }
        }
        if (!placed) {
            // Interval narrower than the perturbation on both sides: clamp to
            // the nearest bound and report it.
            const double dlo = x0[i] - lo;
            const double dhi = hi - x0[i];
            result.point[i] = dlo <= dhi ? lo : hi;
            result.clamped.push_back(i);
        }
    }
    return result;
}

std::int64_t count_jacobian_nnz(const ExtendedFunction& F, std::span<const double> x) {
    const SparseJacobian J = eval_sparse_jacobian(F, x);
    return J.pattern.nnz();
}

SparsityPattern detect_jacobian_pattern(const ExtendedFunction& F, std::span<const double> x0,
                                        std::uint64_t seed) {
    const PerturbedPoint p =
        perturb_point(x0, F.lower_bounds(), F.upper_bounds(), seed);
    const SparseJacobian J = eval_sparse_jacobian(F, p.point);

    std::vector<std::int32_t> offsets;
    offsets.reserve(static_cast<std::size_t>(J.pattern.rows()) + 1);
    offsets.push_back(0);
    std::vector<std::int32_t> indices;
    for (int i = 0; i < J.pattern.rows(); ++i) {
        const auto row = J.pattern.row(i);
        const std::int32_t base = J.pattern.row_offsets()[i];
        for (std::size_t k = 0; k < row.size(); ++k)
            if (J.values[base + k] != 0.0) indices.push_back(row[k]);
        offsets.push_back(static_cast<std::int32_t>(indices.size()));
    }
    return SparsityPattern(J.pattern.rows(), J.pattern.cols(), std::move(offsets),
                           std::move(indices));
}

SymmetricPattern jtj_pattern(const SparsityPattern& J) {
    const int n = J.cols();
    // Bucket pairs by the larger index; dedup per bucket at the end.
    std::vector<std::vector<std::int32_t>> lower_rows(n);
    for (int r = 0; r < J.rows(); ++r) {
        const auto row = J.row(r);
        for (std::size_t a = 0; a < row.size(); ++a) {
            lower_rows[row[a]].push_back(row[a]); // diagonal for every appearing column
            for (std::size_t b = a + 1; b < row.size(); ++b)
                lower_rows[row[b]].push_back(row[a]);
        }
    }
    for (auto& bucket : lower_rows) {
        std::sort(bucket.begin(), bucket.end());
        bucket.erase(std::unique(bucket.begin(), bucket.end()), bucket.end());
    }
    return SymmetricPattern(SparsityPattern::from_rows(n, lower_rows));
}

std::int64_t count_hessian_nnz(const SparsityPattern& J) {
    const int n = J.cols();
    std::vector<std::int32_t> col_offsets, row_indices;
    J.build_column_map(col_offsets, row_indices);

    std::vector<std::int32_t> stamp(n, -1);
    std::int64_t count = 0;
    for (int i = 0; i < n; ++i) {
        for (std::int32_t k = col_offsets[i]; k < col_offsets[i + 1]; ++k) {
            const std::int32_t r = row_indices[k];
            for (std::int32_t j : J.row(r)) {
                if (stamp[j] != i) {
                    stamp[j] = i;
                    ++count; // ordered pair (i, j), diagonal counted once per i
                }
            }
        }
    }
    return count;
}

} // namespace psad
