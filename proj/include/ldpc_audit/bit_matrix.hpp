#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ldpc_audit {

/// A vector over GF(2), one byte per entry holding 0 or 1.
using BitVector = std::vector<std::uint8_t>;

/// Dense matrix over GF(2), row-major and bit-packed into 64-bit words.
///
/// Indices are 0-based. Empty shapes (0 rows and/or 0 columns) are legal.
/// Padding bits past the last column of every row are kept at zero so that
/// word-wise popcounts and comparisons stay exact.
class BitMatrix {
public:
    using Word = std::uint64_t;
    static constexpr std::size_t kWordBits = 64;

    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols);

    static BitMatrix identity(std::size_t n);
    static BitMatrix ones(std::size_t rows, std::size_t cols);
    /// Builds a matrix from strings of '0'/'1' characters, one per row.
    static BitMatrix from_strings(std::span<const std::string> rows);
    static BitMatrix from_strings(std::initializer_list<std::string_view> rows);
    /// Builds a matrix whose rows are the given vectors (all the same length).
    static BitMatrix from_rows(std::span<const BitVector> rows, std::size_t cols);

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }
    [[nodiscard]] std::size_t words_per_row() const { return stride_; }
    [[nodiscard]] bool empty() const { return rows_ == 0 || cols_ == 0; }

    /// Unchecked access.
    [[nodiscard]] bool get(std::size_t i, std::size_t j) const {
        return (bits_[i * stride_ + j / kWordBits] >> (j % kWordBits)) & 1U;
    }
    void set(std::size_t i, std::size_t j, bool value = true) {
        const Word mask = Word{1} << (j % kWordBits);
        Word& w = bits_[i * stride_ + j / kWordBits];
        w = value ? (w | mask) : (w & ~mask);
    }
    void flip(std::size_t i, std::size_t j) {
        bits_[i * stride_ + j / kWordBits] ^= Word{1} << (j % kWordBits);
    }

    /// Bounds-checked access; throws IndexError.
    [[nodiscard]] bool at(std::size_t i, std::size_t j) const;

    [[nodiscard]] std::span<const Word> row_words(std::size_t i) const {
        return {bits_.data() + i * stride_, stride_};
    }
    [[nodiscard]] std::span<Word> row_words(std::size_t i) {
        return {bits_.data() + i * stride_, stride_};
    }

    /// row(dst) ^= row(src)
    void xor_row(std::size_t dst, std::size_t src);
    void swap_rows(std::size_t a, std::size_t b);

    [[nodiscard]] std::size_t row_weight(std::size_t i) const;
    [[nodiscard]] std::size_t count_ones() const;
    /// Column indices of the set bits of row i, ascending.
    [[nodiscard]] std::vector<std::size_t> row_support(std::size_t i) const;
    [[nodiscard]] BitVector row(std::size_t i) const;

    /// Appends a row given as a 0/1 vector of length cols().
    void append_row(std::span<const std::uint8_t> row);

    [[nodiscard]] BitMatrix transpose() const;

    /// Entry-wise sum over GF(2); shapes must match.
    BitMatrix& operator^=(const BitMatrix& other);
    friend BitMatrix operator^(BitMatrix a, const BitMatrix& b) { return a ^= b; }

    /// Matrix-vector product over GF(2).
    [[nodiscard]] BitVector multiply(std::span<const std::uint8_t> x) const;

    /// One line per row of '0'/'1' characters, each terminated by '\n'.
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t stride_ = 0;
    std::vector<Word> bits_;
};

/// Ordered row set C and column set V naming the submatrix M(C, V) of a
/// parent matrix. Order is the insertion order of whichever algorithm built
/// it, so traces stay reproducible.
struct SubSelection {
    std::vector<std::size_t> row_ids;
    std::vector<std::size_t> col_ids;

    /// Selects every row and column of a rows x cols parent.
    static SubSelection all(std::size_t rows, std::size_t cols);
    static SubSelection all(const BitMatrix& m) { return all(m.rows(), m.cols()); }

    [[nodiscard]] bool empty() const { return row_ids.empty() && col_ids.empty(); }

    /// Throws IndexError on an out-of-range index and PreconditionError on a
    /// duplicate.
    void validate(const BitMatrix& parent) const;

    friend bool operator==(const SubSelection&, const SubSelection&) = default;
};

/// Returns a copy of `s` with both index lists sorted ascending.
SubSelection sorted(SubSelection s);

/// Parent indices in [0, n) not present in `ids`, ascending.
std::vector<std::size_t> complement(std::span<const std::size_t> ids, std::size_t n);

}  // namespace ldpc_audit
