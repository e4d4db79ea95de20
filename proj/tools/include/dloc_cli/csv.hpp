#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dloc::cli {

// Shortest round-trip text for a double; inf/nan spelled out.
std::string fmt(double x);
std::string fmt(std::int64_t x);
std::string fmt(std::uint64_t x);
inline std::string fmt(int x) { return fmt(std::int64_t(x)); }
inline std::string fmt(unsigned x) { return fmt(std::uint64_t(x)); }
inline std::string fmt(bool x) { return x ? "1" : "0"; }
inline std::string fmt(const std::string& s) { return s; }
inline std::string fmt(const char* s) { return s; }

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    const std::vector<std::string>& header() const { return header_; }
    std::size_t rows() const { return rows_.size(); }

    template <class... Ts>
    void add(const Ts&... values) {
        add_row({fmt(values)...});
    }
    void add_row(std::vector<std::string> cells);
    void append(const CsvTable& other);

    std::string str() const;
    void write(const std::string& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// Quotes a cell when it holds a separator, quote or newline.
std::string csv_escape(const std::string& cell);

}  // namespace dloc::cli
