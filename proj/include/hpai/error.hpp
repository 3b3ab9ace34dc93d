#pragma once

#include <stdexcept>
#include <string>

namespace hpai {

// Invalid parameters, states or configuration values.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation left the admissible numeric domain (non-finite state,
// negativity under the reject policy, singular matrix).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hpai
