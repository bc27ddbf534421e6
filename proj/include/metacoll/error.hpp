#ifndef METACOLL_ERROR_HPP
#define METACOLL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace metacoll {

// Categories double as the C API status codes (see metacoll.h).
enum class ErrorCode : int {
  invalid_argument = 1,
  domain = 2,
  convergence = 3,
  resonance = 4,
  io = 5,
  parse = 6,
  config = 7,
  degenerate = 8,
  coverage = 9,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, const std::string& what,
                    ErrorCode code = ErrorCode::invalid_argument) {
  if (!cond) fail(code, what);
}

}  // namespace metacoll

#endif
