#pragma once

#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "psad/scalars.hpp"

namespace psad {

/// A user problem: the stacked component functions of a partially separable
/// f(x) = Σ f_k(x), with dimensions and optional box bounds. Components are
/// written once as a generic functor over the scalar realizations;
/// make_extended_function instantiates all four evaluation modes from it.
///
/// The component count m may be unknown until the first evaluation
/// (components are discovered from the output length).
class ExtendedFunction {
public:
    template <class S>
    using Evaluator = std::function<void(std::span<const S>, std::vector<S>&)>;

    ExtendedFunction() = default;

    ExtendedFunction(int n, Evaluator<PlainValue> plain, Evaluator<DualVector> dual,
                     Evaluator<SparseDual> sparse, Evaluator<SecondOrderDual> second,
                     std::vector<double> lower = {}, std::vector<double> upper = {})
        : n_(n),
          lower_(std::move(lower)),
          upper_(std::move(upper)),
          plain_(std::move(plain)),
          dual_(std::move(dual)),
          sparse_(std::move(sparse)),
          second_(std::move(second)) {
        if (!lower_.empty() && static_cast<int>(lower_.size()) != n_)
            throw std::invalid_argument("lower bound length does not match n");
        if (!upper_.empty() && static_cast<int>(upper_.size()) != n_)
            throw std::invalid_argument("upper bound length does not match n");
    }

    int n() const noexcept { return n_; }

    /// Component count, or -1 while still undiscovered.
    int m() const noexcept { return m_; }

    bool has_bounds() const noexcept { return !lower_.empty() || !upper_.empty(); }

    double lower(int i) const {
        return lower_.empty() ? -std::numeric_limits<double>::infinity() : lower_[i];
    }
    double upper(int i) const {
        return upper_.empty() ? std::numeric_limits<double>::infinity() : upper_[i];
    }

    const std::vector<double>& lower_bounds() const noexcept { return lower_; }
    const std::vector<double>& upper_bounds() const noexcept { return upper_; }

    template <class S>
    void evaluate(std::span<const S> x, std::vector<S>& out) const {
        out.clear();
        evaluator<S>()(x, out);
        record_component_count(static_cast<int>(out.size()));
    }

    void record_component_count(int m) const {
        if (m_ < 0) {
            m_ = m;
        } else if (m_ != m) {
            throw std::logic_error("component count changed between evaluations");
        }
    }

private:
    template <class S>
    const Evaluator<S>& evaluator() const {
        if constexpr (std::is_same_v<S, PlainValue>) return plain_;
        else if constexpr (std::is_same_v<S, DualVector>) return dual_;
        else if constexpr (std::is_same_v<S, SparseDual>) return sparse_;
        else return second_;
    }

    int n_ = 0;
    mutable int m_ = -1;
    std::vector<double> lower_;
    std::vector<double> upper_;
    Evaluator<PlainValue> plain_;
    Evaluator<DualVector> dual_;
    Evaluator<SparseDual> sparse_;
    Evaluator<SecondOrderDual> second_;
};

/// Builds an ExtendedFunction from a functor callable as
///   f(std::span<const S> x, std::vector<S>& components)
/// for every scalar realization S (a generic lambda works).
template <class F>
ExtendedFunction make_extended_function(int n, F f, std::vector<double> lower = {},
                                        std::vector<double> upper = {}) {
    return ExtendedFunction(
        n,
        [f](std::span<const PlainValue> x, std::vector<PlainValue>& out) { f(x, out); },
        [f](std::span<const DualVector> x, std::vector<DualVector>& out) { f(x, out); },
        [f](std::span<const SparseDual> x, std::vector<SparseDual>& out) { f(x, out); },
        [f](std::span<const SecondOrderDual> x, std::vector<SecondOrderDual>& out) { f(x, out); },
        std::move(lower), std::move(upper));
}

} // namespace psad
