#pragma once

#include <stdexcept>
#include <string>

namespace epdyn {

/// Malformed literal (set, point, generator, block code, scenario line).
class parse_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Well-formed input that violates an operation's contract.
class input_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation's mathematical precondition failed (e.g. not an AET pair).
class precondition_error : public input_error {
 public:
  using input_error::input_error;
};

/// A point coordinate falls outside what a filter's scope can decide.
class scope_error : public input_error {
 public:
  using input_error::input_error;
};

/// A configurable safety cap was exceeded.
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A construction failed its own post-verification. Always a bug.
class construction_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace epdyn
