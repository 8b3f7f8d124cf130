#ifndef REGDIGRAPH_CSV_HPP
#define REGDIGRAPH_CSV_HPP

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <type_traits>
#include <string>
#include <vector>

#include "core.hpp"

namespace regdigraph {

/// %.17g, which round-trips; inf and nan spelled out.
inline std::string format_double(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// A CSV table with a fixed header. Every row must match the header width.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    const std::vector<std::string>& header() const { return header_; }
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }

    /// Appends one row; cells are strings, integers or doubles.
    template <class... Cells>
    void add(const Cells&... cells) {
        std::vector<std::string> row;
        (row.push_back(cell(cells)), ...);
        add_row(std::move(row));
    }

    void add_row(std::vector<std::string> row) {
        if (row.size() != header_.size()) {
            throw ValidationError("CSV row has " + std::to_string(row.size()) + " cells, header has " +
                                  std::to_string(header_.size()));
        }
        rows_.push_back(std::move(row));
    }

    void write(std::ostream& os) const {
        write_line(os, header_);
        for (const auto& r : rows_) {
            write_line(os, r);
        }
    }

    std::string str() const {
        std::ostringstream os;
        write(os);
        return os.str();
    }

private:
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }
    static std::string cell(bool b) { return b ? "1" : "0"; }
    static std::string cell(double x) { return format_double(x); }
    template <class T>
    static std::string cell(const T& x)
        requires std::is_integral_v<T>
    {
        return std::to_string(x);
    }

    static void write_line(std::ostream& os, const std::vector<std::string>& cells) {
        for (std::size_t k = 0; k < cells.size(); ++k) {
            if (k) {
                os << ',';
            }
            const auto& c = cells[k];
            if (c.find_first_of(",\"\n") != std::string::npos) {
                os << '"';
                for (char ch : c) {
                    os << (ch == '"' ? "\"\"" : std::string(1, ch));
                }
                os << '"';
            } else {
                os << c;
            }
        }
        os << '\n';
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

inline void write_csv(const CsvTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ValidationError("cannot write CSV file '" + path + "'");
    }
    table.write(out);
    if (!out) {
        throw RuntimeFailure("write failed for '" + path + "'");
    }
}

} // namespace regdigraph

#endif
