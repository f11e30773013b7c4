#pragma once

#include <stdexcept>
#include <string>

namespace mink {

/* Error category; mirrors the status codes exposed through the C API. */
enum class errc {
    invalid_argument,
    parse,
    validation,
    numeric,
    io,
    internal,
};

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const { return code_; }

private:
    errc code_;
};

} // namespace mink
