#ifndef DNCDAG_ERRORS_HPP
#define DNCDAG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dncdag {

enum class ErrorCode {
    io = 1,
    parse = 2,
    invalid = 3,
    infeasible = 4,
    degenerate = 5,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void throw_io(const std::string& msg) { throw Error(ErrorCode::io, msg); }
[[noreturn]] inline void throw_parse(const std::string& msg) { throw Error(ErrorCode::parse, msg); }
[[noreturn]] inline void throw_invalid(const std::string& msg) { throw Error(ErrorCode::invalid, msg); }
[[noreturn]] inline void throw_infeasible(const std::string& msg) { throw Error(ErrorCode::infeasible, msg); }
[[noreturn]] inline void throw_degenerate(const std::string& msg) { throw Error(ErrorCode::degenerate, msg); }

}  // namespace dncdag

#endif
