#include "etdr/error.hpp"

namespace etdr {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ParamDomain: return "parameter-domain";
    case ErrorKind::DegreeMismatch: return "degree-mismatch";
    case ErrorKind::KeyIo: return "key-io";
    case ErrorKind::KeyExhausted: return "key-exhausted";
    case ErrorKind::MacFailure: return "mac-failure";
    case ErrorKind::ProtocolState: return "protocol-state";
    case ErrorKind::Malformed: return "malformed";
    case ErrorKind::Entropy: return "entropy";
    case ErrorKind::Transport: return "transport";
  }
  return "unknown";
}

}  // namespace etdr
