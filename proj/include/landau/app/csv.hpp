#pragma once

// CSV tables with a fixed header and shortest round-trip number formatting,
// so equal doubles always print as equal bytes.

#include <charconv>
#include <fstream>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

namespace landau::app {

inline std::string format_double(double value) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, value);
    if (r.ec != std::errc{}) throw std::runtime_error("number formatting failed");
    return std::string(buf, r.ptr);
}

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    const std::vector<std::string>& header() const { return header_; }
    std::size_t rows() const { return rows_; }

    void add_row(std::span<const double> values) {
        if (values.size() != header_.size()) throw std::logic_error("csv row width does not match header");
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) body_ += ',';
            body_ += format_double(values[i]);
        }
        body_ += '\n';
        ++rows_;
    }
    void add_row(std::initializer_list<double> values) { add_row(std::span<const double>(values.begin(), values.size())); }

    std::string str() const {
        std::string out;
        for (std::size_t i = 0; i < header_.size(); ++i) {
            if (i) out += ',';
            out += header_[i];
        }
        out += '\n';
        return out + body_;
    }

    void write(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + path + " for writing");
        f << str();
        if (!f) throw std::runtime_error("failed writing " + path);
    }

private:
    std::vector<std::string> header_;
    std::string body_;
    std::size_t rows_ = 0;
};

} // namespace landau::app
