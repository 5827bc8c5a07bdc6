#pragma once

#include <stdexcept>
#include <string>

namespace etdr {

enum class ErrorKind {
  ParamDomain,    // parameters outside the supported/secure domain
  DegreeMismatch, // field elements of different degree combined
  KeyIo,          // key / session files missing, unreadable or corrupted
  KeyExhausted,   // one-time pad or MAC key already consumed
  MacFailure,     // authentication tag did not verify
  ProtocolState,  // operation not allowed in the current phase
  Malformed,      // wire frame could not be decoded
  Entropy,        // randomness source failed
  Transport,      // socket-level failure
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace etdr
