#pragma once

#include <stdexcept>
#include <string>

namespace qhfmp {

enum class Errc {
  invalid_argument = 1,
  io = 2,
  numeric = 3,
  internal = 4,
};

// Library-wide exception; carries a coarse code so the C boundary can map it
// onto status values without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message) : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) { throw Error(code, message); }

}  // namespace qhfmp
