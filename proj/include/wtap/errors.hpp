#ifndef WTAP_ERRORS_HPP
#define WTAP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wtap {

// Malformed input: unknown node, bad cost, even boundary, ...
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operation called on an object in the wrong state (unrooted instance,
// missing shadow, violated precondition).
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// No feasible cover / LP infeasible.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Iteration, node or size limit exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Something the theory rules out happened anyway.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace wtap

#endif  // WTAP_ERRORS_HPP
