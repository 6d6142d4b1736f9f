#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace webclust {

namespace detail {
inline std::string with_line(const std::string& msg, std::size_t line) {
    return line == 0 ? msg : "line " + std::to_string(line) + ": " + msg;
}
}  // namespace detail

// Malformed input text: bad token, missing dictionary, empty dataset.
// line is 1-based; 0 means the error is not tied to a single line.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg, std::size_t line = 0)
        : std::runtime_error(detail::with_line(msg, line)), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Well-formed input that violates a range or consistency rule.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg, std::size_t line = 0)
        : std::runtime_error(detail::with_line(msg, line)), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace webclust
