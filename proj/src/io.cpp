#include "girg/io.hpp"

#include <array>
#include <charconv>
#include <system_error>

namespace girg {

std::string format_double(double x) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf.data(), ptr);
}

double parse_double(std::string_view s) {
    s = trim(s);
    double x = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw std::invalid_argument("not a number: '" + std::string(s) + "'");
    return x;
}

std::uint64_t parse_u64(std::string_view s) {
    s = trim(s);
    std::uint64_t x = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw std::invalid_argument("not an unsigned integer: '" + std::string(s) + "'");
    return x;
}

std::string_view trim(std::string_view s) noexcept {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(s.substr(start)));
            return out;
        }
        out.push_back(trim(s.substr(start, pos - start)));
        start = pos + 1;
    }
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

std::map<std::string, std::string> parse_header_fields(std::string_view line) {
    std::map<std::string, std::string> fields;
    for (auto tok : split_ws(line)) {
        const auto eq = tok.find('=');
        if (eq == std::string_view::npos) continue;
        fields.emplace(std::string(tok.substr(0, eq)), std::string(tok.substr(eq + 1)));
    }
    return fields;
}

bool LineReader::next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

std::string LineReader::expect(const char* what) {
    std::string line;
    if (!next(line)) throw ParseError(line_ + 1, std::string("unexpected end of file, expected ") + what);
    return line;
}

}  // namespace girg
