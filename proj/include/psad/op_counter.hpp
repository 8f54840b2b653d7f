#pragma once

#include <cstdint>

namespace psad {

/// Tally of elementary scalar operations performed during one evaluation.
/// Additions (including subtractions and negations), multiplications,
/// divisions, and elementary-function calls are counted separately; every
/// double-precision operation performed by a scalar realization counts as
/// one, so a width-p dual addition tallies p+1 adds.
struct OpCounter {
    std::uint64_t adds = 0;
    std::uint64_t muls = 0;
    std::uint64_t divs = 0;
    std::uint64_t calls = 0;

    std::uint64_t total() const noexcept { return adds + muls + divs + calls; }

    void reset() noexcept { adds = muls = divs = calls = 0; }

    OpCounter& operator+=(const OpCounter& o) noexcept {
        adds += o.adds;
        muls += o.muls;
        divs += o.divs;
        calls += o.calls;
        return *this;
    }
};

namespace detail {

OpCounter*& active_counter() noexcept;

inline void tally_add(std::uint64_t k) noexcept {
    if (OpCounter* c = active_counter()) c->adds += k;
}
inline void tally_mul(std::uint64_t k) noexcept {
    if (OpCounter* c = active_counter()) c->muls += k;
}
inline void tally_div(std::uint64_t k) noexcept {
    if (OpCounter* c = active_counter()) c->divs += k;
}
inline void tally_call(std::uint64_t k) noexcept {
    if (OpCounter* c = active_counter()) c->calls += k;
}

} // namespace detail

/// Routes operation tallies to `counter` for the lifetime of the scope.
/// State is per-thread, so concurrent evaluations on distinct threads do
/// not interfere; nested scopes restore the previous counter on exit.
class CountingScope {
public:
    explicit CountingScope(OpCounter* counter) noexcept
        : previous_(detail::active_counter()) {
        detail::active_counter() = counter;
    }
    ~CountingScope() { detail::active_counter() = previous_; }

    CountingScope(const CountingScope&) = delete;
    CountingScope& operator=(const CountingScope&) = delete;

private:
    OpCounter* previous_;
};

} // namespace psad
