#include "ldpc_audit/bit_matrix.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "ldpc_audit/errors.hpp"

namespace ldpc_audit {

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows),
      cols_(cols),
      stride_((cols + kWordBits - 1) / kWordBits),
      bits_(rows * stride_, 0) {}

BitMatrix BitMatrix::identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i);
    return m;
}

BitMatrix BitMatrix::ones(std::size_t rows, std::size_t cols) {
    BitMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m.set(i, j);
    return m;
}

namespace {

template <typename Range>
BitMatrix parse_rows(const Range& rows) {
    const std::size_t cols = rows.size() == 0 ? 0 : std::string_view(*rows.begin()).size();
    BitMatrix m(rows.size(), cols);
    std::size_t i = 0;
    for (std::string_view r : rows) {
        if (r.size() != cols)
            throw DimensionError("row " + std::to_string(i) + " has " + std::to_string(r.size()) +
                                 " entries, expected " + std::to_string(cols));
        for (std::size_t j = 0; j < cols; ++j) {
            if (r[j] == '1')
                m.set(i, j);
            else if (r[j] != '0')
                throw FormatError("unexpected character '" + std::string(1, r[j]) + "' in row " +
                                  std::to_string(i));
        }
        ++i;
    }
    return m;
}

}  // namespace

BitMatrix BitMatrix::from_strings(std::span<const std::string> rows) { return parse_rows(rows); }

BitMatrix BitMatrix::from_strings(std::initializer_list<std::string_view> rows) {
    return parse_rows(rows);
}

BitMatrix BitMatrix::from_rows(std::span<const BitVector> rows, std::size_t cols) {
    BitMatrix m(0, cols);
    for (const auto& r : rows) m.append_row(r);
    return m;
}

bool BitMatrix::at(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_)
        throw IndexError("entry (" + std::to_string(i) + ", " + std::to_string(j) +
                         ") outside " + std::to_string(rows_) + "x" + std::to_string(cols_));
    return get(i, j);
}

void BitMatrix::xor_row(std::size_t dst, std::size_t src) {
    Word* d = bits_.data() + dst * stride_;
    const Word* s = bits_.data() + src * stride_;
    for (std::size_t k = 0; k < stride_; ++k) d[k] ^= s[k];
}

void BitMatrix::swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    std::swap_ranges(bits_.begin() + static_cast<std::ptrdiff_t>(a * stride_),
                     bits_.begin() + static_cast<std::ptrdiff_t>((a + 1) * stride_),
                     bits_.begin() + static_cast<std::ptrdiff_t>(b * stride_));
}

std::size_t BitMatrix::row_weight(std::size_t i) const {
    std::size_t w = 0;
    for (Word word : row_words(i)) w += static_cast<std::size_t>(std::popcount(word));
    return w;
}

std::size_t BitMatrix::count_ones() const {
    std::size_t w = 0;
    for (Word word : bits_) w += static_cast<std::size_t>(std::popcount(word));
    return w;
}

std::vector<std::size_t> BitMatrix::row_support(std::size_t i) const {
    std::vector<std::size_t> out;
    auto words = row_words(i);
    for (std::size_t k = 0; k < words.size(); ++k) {
        Word w = words[k];
        while (w != 0) {
            out.push_back(k * kWordBits + static_cast<std::size_t>(std::countr_zero(w)));
            w &= w - 1;
        }
    }
    return out;
}

BitVector BitMatrix::row(std::size_t i) const {
    BitVector out(cols_, 0);
    for (std::size_t j = 0; j < cols_; ++j) out[j] = get(i, j) ? 1 : 0;
    return out;
}

void BitMatrix::append_row(std::span<const std::uint8_t> row) {
    if (row.size() != cols_)
        throw DimensionError("appended row has length " + std::to_string(row.size()) +
                             ", matrix has " + std::to_string(cols_) + " columns");
    bits_.resize(bits_.size() + stride_, 0);
    ++rows_;
    for (std::size_t j = 0; j < cols_; ++j)
        if (row[j] & 1U) set(rows_ - 1, j);
}

BitMatrix BitMatrix::transpose() const {
    BitMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j : row_support(i)) t.set(j, i);
    return t;
}

BitMatrix& BitMatrix::operator^=(const BitMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw DimensionError("xor of " + std::to_string(rows_) + "x" + std::to_string(cols_) +
                             " and " + std::to_string(other.rows_) + "x" +
                             std::to_string(other.cols_));
    for (std::size_t k = 0; k < bits_.size(); ++k) bits_[k] ^= other.bits_[k];
    return *this;
}

BitVector BitMatrix::multiply(std::span<const std::uint8_t> x) const {
    if (x.size() != cols_)
        throw DimensionError("vector of length " + std::to_string(x.size()) + " times " +
                             std::to_string(rows_) + "x" + std::to_string(cols_) + " matrix");
    std::vector<Word> packed(stride_, 0);
    for (std::size_t j = 0; j < cols_; ++j)
        if (x[j] & 1U) packed[j / kWordBits] |= Word{1} << (j % kWordBits);
    BitVector out(rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i) {
        auto words = row_words(i);
        Word acc = 0;
        for (std::size_t k = 0; k < stride_; ++k) acc ^= words[k] & packed[k];
        out[i] = static_cast<std::uint8_t>(std::popcount(acc) & 1);
    }
    return out;
}

std::string BitMatrix::to_string() const {
    std::string s;
    s.reserve(rows_ * (cols_ + 1));
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) s.push_back(get(i, j) ? '1' : '0');
        s.push_back('\n');
    }
    return s;
}

SubSelection SubSelection::all(std::size_t rows, std::size_t cols) {
    SubSelection s;
    s.row_ids.resize(rows);
    s.col_ids.resize(cols);
    for (std::size_t i = 0; i < rows; ++i) s.row_ids[i] = i;
    for (std::size_t j = 0; j < cols; ++j) s.col_ids[j] = j;
    return s;
}

namespace {

void check_ids(std::span<const std::size_t> ids, std::size_t bound, const char* what) {
    std::vector<bool> seen(bound, false);
    for (std::size_t id : ids) {
        if (id >= bound)
            throw IndexError(std::string(what) + " index " + std::to_string(id) +
                             " out of range (" + std::to_string(bound) + ")");
        if (seen[id])
            throw PreconditionError(std::string("duplicate ") + what + " index " +
                                    std::to_string(id));
        seen[id] = true;
    }
}

}  // namespace

void SubSelection::validate(const BitMatrix& parent) const {
    check_ids(row_ids, parent.rows(), "row");
    check_ids(col_ids, parent.cols(), "column");
}

SubSelection sorted(SubSelection s) {
    std::ranges::sort(s.row_ids);
    std::ranges::sort(s.col_ids);
    return s;
}

std::vector<std::size_t> complement(std::span<const std::size_t> ids, std::size_t n) {
    std::vector<bool> taken(n, false);
    for (std::size_t id : ids)
        if (id < n) taken[id] = true;
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i)
        if (!taken[i]) out.push_back(i);
    return out;
}

}  // namespace ldpc_audit
