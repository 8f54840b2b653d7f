#pragma once

#include <stdexcept>
#include <string>

namespace psad {

/// Evaluation produced a non-finite value. `component` is the offending row
/// of the extended function; `group` is the seed column when applicable
/// (-1 otherwise).
class domain_error : public std::runtime_error {
public:
    domain_error(std::string what, int component, int group = -1)
        : std::runtime_error(std::move(what)), component_(component), group_(group) {}

    int component() const noexcept { return component_; }
    int group() const noexcept { return group_; }

private:
    int component_;
    int group_;
};

/// A symmetric coloring cannot resolve every pattern entry.
class plan_infeasible_error : public std::runtime_error {
public:
    plan_infeasible_error(std::string what, int row, int col)
        : std::runtime_error(std::move(what)), row_(row), col_(col) {}

    int row() const noexcept { return row_; }
    int col() const noexcept { return col_; }

private:
    int row_;
    int col_;
};

/// Raised by the verifying drivers when a nonzero shows up outside the
/// pattern captured at preparation time.
class pattern_stale_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace psad
