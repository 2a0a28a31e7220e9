#pragma once

#include <stdexcept>
#include <string>

namespace aoi {

// Bad input: out-of-range parameters, malformed configs or policy files.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A computation could not produce a trustworthy result (singular system,
// non-decaying series, unreachable outage set).
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {

[[noreturn]] inline void fail_arg(const std::string& what) {
  throw InvalidArgument(what);
}

[[noreturn]] inline void fail_num(const std::string& what) {
  throw NumericalError(what);
}

}  // namespace detail
}  // namespace aoi
