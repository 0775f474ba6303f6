#include "subdense/format.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <system_error>

#include "subdense/errors.hpp"

namespace subdense {

namespace {

std::string special(double v) {
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

void write_bytes(const std::string& path, const char* data, std::size_t size) {
    if (path == "-") {
        std::cout.write(data, static_cast<std::streamsize>(size));
        std::cout.flush();
        return;
    }
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out.write(data, static_cast<std::streamsize>(size));
        if (!out) throw Error("write to " + tmp.string() + " failed");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw Error("cannot move output into place at " + path + ": " + ec.message());
    }
}

}  // namespace

std::string format_number(double v) {
    if (!std::isfinite(v)) return special(v);
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_number(double v, int digits) {
    if (!std::isfinite(v)) return special(v);
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
    return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_row(const std::vector<double>& values) { add_row({}, values); }

void CsvTable::add_row(const std::vector<std::string>& text, const std::vector<double>& values) {
    if (text.size() + values.size() != columns_.size()) throw Error("csv row width does not match the header");
    std::string line;
    for (const auto& s : text) {
        if (!line.empty()) line += ',';
        line += s;
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0 || !text.empty()) line += ',';
        line += format_number(values[i]);
    }
    rows_.push_back(std::move(line));
}

std::string CsvTable::str() const {
    std::string out;
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (i) out += ',';
        out += columns_[i];
    }
    out += '\n';
    for (const auto& r : rows_) {
        out += r;
        out += '\n';
    }
    return out;
}

void write_atomic(const std::string& path, const std::string& content) {
    write_bytes(path, content.data(), content.size());
}

void write_atomic(const std::string& path, const std::vector<double>& values) {
    static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);
    std::string bytes(values.size() * sizeof(double), '\0');
    for (std::size_t i = 0; i < values.size(); ++i) {
        auto bits = std::bit_cast<std::uint64_t>(values[i]);
        if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
        std::memcpy(bytes.data() + i * 8, &bits, 8);
    }
    write_bytes(path, bytes.data(), bytes.size());
}

}  // namespace subdense
