#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace girg {

// Failure to open, read or write a file.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input; carries the 1-based line number where parsing stopped.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Shortest decimal representation that parses back to the same double.
std::string format_double(double x);

double parse_double(std::string_view s);
std::uint64_t parse_u64(std::string_view s);

std::string_view trim(std::string_view s) noexcept;
std::vector<std::string_view> split(std::string_view s, char sep);
std::vector<std::string_view> split_ws(std::string_view s);

// Parses "k1=v1 k2=v2 ..." tokens following a prefix such as "# girg-lab v1".
std::map<std::string, std::string> parse_header_fields(std::string_view line);

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    // Next line (without trailing newline / CR). False at end of input.
    bool next(std::string& line);

    // Like next() but raises ParseError naming `what` at end of input.
    std::string expect(const char* what);

    std::size_t line_number() const noexcept { return line_; }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, what); }

private:
    std::istream& in_;
    std::size_t line_ = 0;
};

}  // namespace girg
