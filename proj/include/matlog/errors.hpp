#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace matlog {

// Resource limits were hit; the computation was refused, not truncated.
class cap_exceeded : public std::runtime_error {
public:
    explicit cap_exceeded(const std::string& what) : std::runtime_error(what) {}
};

// Formula / sequent text could not be parsed.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, std::size_t position)
        : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
          position_(position) {}

    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

// A fixture file is malformed.
class fixture_error : public std::runtime_error {
public:
    explicit fixture_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace matlog
