#pragma once

#include <stdexcept>
#include <string>

namespace dlfr {

enum class ErrorKind {
    parameter,  // invalid argument or configuration value
    dimension,  // frame/clip/vector shape mismatch
    config,     // malformed config file or inconsistent run settings
    io,         // file system failure
    format,     // malformed file contents
    magic,      // container: wrong magic bytes
    version,    // container: unsupported version
    truncated,  // container: ran out of bytes
    checksum,   // container: CRC32 mismatch
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

inline void require(bool cond, ErrorKind kind, const std::string& what) {
    if (!cond) fail(kind, what);
}

inline void require(bool cond, ErrorKind kind, const char* what) {
    if (!cond) fail(kind, what);
}

}  // namespace dlfr
