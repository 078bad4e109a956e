#include "dlfr/error.hpp"

namespace dlfr {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::parameter: return "parameter";
        case ErrorKind::dimension: return "dimension";
        case ErrorKind::config: return "config";
        case ErrorKind::io: return "io";
        case ErrorKind::format: return "format";
        case ErrorKind::magic: return "magic";
        case ErrorKind::version: return "version";
        case ErrorKind::truncated: return "truncated";
        case ErrorKind::checksum: return "checksum";
    }
    return "unknown";
}

}  // namespace dlfr
