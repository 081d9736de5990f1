#include "ldpc_audit/matrix_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "ldpc_audit/errors.hpp"
#include "ldpc_audit/gf2.hpp"

namespace ldpc_audit {

namespace {

/// Line-oriented integer reader that remembers where it is for error messages.
class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    /// Next line holding at least one token; false at end of input.
    bool next(std::vector<long long>& values) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            values.clear();
            std::istringstream ss(line);
            std::string tok;
            bool any = false;
            while (ss >> tok) {
                any = true;
                long long v = 0;
                auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
                if (ec != std::errc{} || ptr != tok.data() + tok.size())
                    throw FormatError("expected an integer, found '" + tok + "'", line_no_);
                values.push_back(v);
            }
            if (any) return true;
        }
        return false;
    }

    std::vector<long long> require(const char* what) {
        std::vector<long long> v;
        if (!next(v)) throw FormatError(std::string("unexpected end of file while reading ") + what,
                                        line_no_ + 1);
        return v;
    }

    [[nodiscard]] std::size_t line() const { return line_no_; }

private:
    std::istream& in_;
    std::size_t line_no_ = 0;
};

std::size_t as_count(long long v, std::size_t line, const char* what) {
    if (v < 0) throw FormatError(std::string("negative ") + what, line);
    return static_cast<std::size_t>(v);
}

}  // namespace

BitMatrix read_alist(std::istream& in) {
    LineReader rd(in);
    auto header = rd.require("the header");
    if (header.size() != 2) throw FormatError("header must be 'n m'", rd.line());
    const std::size_t n = as_count(header[0], rd.line(), "column count");
    const std::size_t m = as_count(header[1], rd.line(), "row count");

    auto maxes = rd.require("maximum weights");
    if (maxes.size() != 2) throw FormatError("expected 'max_col_weight max_row_weight'", rd.line());
    const std::size_t max_cw = as_count(maxes[0], rd.line(), "weight");
    const std::size_t max_rw = as_count(maxes[1], rd.line(), "weight");

    // Empty dimensions produce empty weight lines; the writer emits them as
    // blank lines, which the reader skips, so only read when non-empty.
    std::vector<long long> col_w;
    std::vector<long long> row_w;
    if (n > 0) col_w = rd.require("column weights");
    if (n > 0 && col_w.size() != n)
        throw FormatError("expected " + std::to_string(n) + " column weights", rd.line());
    if (m > 0) row_w = rd.require("row weights");
    if (m > 0 && row_w.size() != m)
        throw FormatError("expected " + std::to_string(m) + " row weights", rd.line());

    BitMatrix by_cols(m, n);
    for (std::size_t j = 0; j < n; ++j) {
        auto entries = rd.require("a column list");
        std::size_t count = 0;
        for (long long e : entries) {
            if (e == 0) continue;
            if (e < 0 || static_cast<std::size_t>(e) > m)
                throw FormatError("row index " + std::to_string(e) + " out of range", rd.line());
            if (by_cols.get(static_cast<std::size_t>(e - 1), j))
                throw FormatError("duplicate row index " + std::to_string(e), rd.line());
            by_cols.set(static_cast<std::size_t>(e - 1), j);
            ++count;
        }
        if (count != static_cast<std::size_t>(col_w[j]) || count > max_cw)
            throw FormatError("column " + std::to_string(j + 1) + " list disagrees with its weight",
                              rd.line());
    }
    BitMatrix by_rows(m, n);
    for (std::size_t i = 0; i < m; ++i) {
        auto entries = rd.require("a row list");
        std::size_t count = 0;
        for (long long e : entries) {
            if (e == 0) continue;
            if (e < 0 || static_cast<std::size_t>(e) > n)
                throw FormatError("column index " + std::to_string(e) + " out of range", rd.line());
            if (by_rows.get(i, static_cast<std::size_t>(e - 1)))
                throw FormatError("duplicate column index " + std::to_string(e), rd.line());
            by_rows.set(i, static_cast<std::size_t>(e - 1));
            ++count;
        }
        if (count != static_cast<std::size_t>(row_w[i]) || count > max_rw)
            throw FormatError("row " + std::to_string(i + 1) + " list disagrees with its weight",
                              rd.line());
    }
    if (!(by_cols == by_rows))
        throw FormatError("column lists and row lists describe different matrices", rd.line());
    std::vector<long long> trailing;
    if (rd.next(trailing)) throw FormatError("trailing data after the row lists", rd.line());
    return by_rows;
}

void write_alist(std::ostream& out, const BitMatrix& m) {
    const auto cw = col_weights(m);
    const auto rw = row_weights(m);
    const std::size_t max_cw = cw.empty() ? 0 : *std::ranges::max_element(cw);
    const std::size_t max_rw = rw.empty() ? 0 : *std::ranges::max_element(rw);
    auto join = [&out](const std::vector<std::size_t>& v) {
        for (std::size_t k = 0; k < v.size(); ++k) out << (k ? " " : "") << v[k];
        out << '\n';
    };
    out << m.cols() << ' ' << m.rows() << '\n' << max_cw << ' ' << max_rw << '\n';
    join(cw);
    join(rw);
    const BitMatrix t = m.transpose();
    for (std::size_t j = 0; j < m.cols(); ++j) {
        auto s = t.row_support(j);
        for (auto& x : s) ++x;
        s.resize(std::max(max_cw, std::size_t{1}), 0);
        join(s);
    }
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto s = m.row_support(i);
        for (auto& x : s) ++x;
        s.resize(std::max(max_rw, std::size_t{1}), 0);
        join(s);
    }
}

std::string to_alist(const BitMatrix& m) {
    std::ostringstream ss;
    write_alist(ss, m);
    return ss.str();
}

BitMatrix read_dense(std::istream& in) {
    std::vector<std::string> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (!rows.empty() && line.size() != rows.front().size())
            throw FormatError("row has " + std::to_string(line.size()) + " entries, expected " +
                                  std::to_string(rows.front().size()),
                              line_no);
        if (line.find_first_not_of("01") != std::string::npos)
            throw FormatError("dense rows may only contain '0' and '1'", line_no);
        rows.push_back(line);
    }
    return BitMatrix::from_strings(std::span<const std::string>(rows));
}

void write_dense(std::ostream& out, const BitMatrix& m) { out << m.to_string(); }

BitMatrix read_matrix(std::istream& in) {
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    std::istringstream probe(text);
    std::string line;
    while (std::getline(probe, line)) {
        if (line.empty() || line.front() == '#' ||
            line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        std::istringstream ss(line);
        long long a = 0;
        long long b = 0;
        std::string rest;
        std::istringstream src(text);
        if ((ss >> a >> b) && !(ss >> rest) && line.find_first_not_of("01\r") != std::string::npos)
            return read_alist(src);
        return read_dense(src);
    }
    return BitMatrix{};
}

BitMatrix read_matrix_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path.string());
    return read_matrix(in);
}

void write_matrix_file(const std::filesystem::path& path, const BitMatrix& m,
                       MatrixFormat format) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path.string());
    if (format == MatrixFormat::alist)
        write_alist(out, m);
    else
        write_dense(out, m);
}

}  // namespace ldpc_audit
