#pragma once

#include <stdexcept>
#include <string>

namespace smfdfa {

/// Bad input data or arguments: unreadable files, malformed rows, violated
/// preconditions. The CLI maps these to exit code 2.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation that cannot produce a finite answer for valid-looking
/// input (zero-variance windows under negative moments, degenerate
/// periodograms, diverging training). The CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

template <class E = InputError>
inline void require(bool cond, const std::string& what) {
    if (!cond) throw E(what);
}

}  // namespace detail
}  // namespace smfdfa
