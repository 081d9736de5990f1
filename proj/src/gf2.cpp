#include "ldpc_audit/gf2.hpp"

#include <string>

#include "ldpc_audit/errors.hpp"

namespace ldpc_audit {

RowEchelon row_echelon(BitMatrix m) {
    RowEchelon out;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && !m.get(p, c)) ++p;
        if (p == m.rows()) continue;
        m.swap_rows(r, p);
        for (std::size_t i = 0; i < m.rows(); ++i)
            if (i != r && m.get(i, c)) m.xor_row(i, r);
        out.pivot_cols.push_back(c);
        ++r;
    }
    out.reduced = std::move(m);
    return out;
}

std::size_t rank(const BitMatrix& m) {
    // Forward elimination only; rank does not need the reduced form.
    BitMatrix work = m;
    std::size_t r = 0;
    for (std::size_t c = 0; c < work.cols() && r < work.rows(); ++c) {
        std::size_t p = r;
        while (p < work.rows() && !work.get(p, c)) ++p;
        if (p == work.rows()) continue;
        work.swap_rows(r, p);
        for (std::size_t i = r + 1; i < work.rows(); ++i)
            if (work.get(i, c)) work.xor_row(i, r);
        ++r;
    }
    return r;
}

KernelBasis kernel_basis(const BitMatrix& m) {
    const RowEchelon e = row_echelon(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t c : e.pivot_cols) is_pivot[c] = true;

    KernelBasis kb;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        BitVector v(m.cols(), 0);
        v[f] = 1;
        // Row k of the reduced form reads x_{pivot_k} + sum over free columns = 0.
        for (std::size_t k = 0; k < e.pivot_cols.size(); ++k)
            if (e.reduced.get(k, f)) v[e.pivot_cols[k]] = 1;
        kb.basis_vectors.push_back(std::move(v));
    }
    kb.dimension = kb.basis_vectors.size();
    return kb;
}

std::vector<BitVector> left_kernel_basis(const BitMatrix& m) {
    // Eliminate [M | I]; rows whose M-part vanishes carry left-kernel vectors
    // in their identity part.
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    BitMatrix aug(rows, cols + rows);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j : m.row_support(i)) aug.set(i, j);
        aug.set(i, cols + i);
    }
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && !aug.get(p, c)) ++p;
        if (p == rows) continue;
        aug.swap_rows(r, p);
        for (std::size_t i = 0; i < rows; ++i)
            if (i != r && aug.get(i, c)) aug.xor_row(i, r);
        ++r;
    }
    std::vector<BitVector> out;
    for (std::size_t i = r; i < rows; ++i) {
        BitVector y(rows, 0);
        for (std::size_t k = 0; k < rows; ++k) y[k] = aug.get(i, cols + k) ? 1 : 0;
        out.push_back(std::move(y));
    }
    return out;
}

BitMatrix kronecker(const BitMatrix& a, const BitMatrix& b) {
    BitMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ia = 0; ia < a.rows(); ++ia)
        for (std::size_t ja : a.row_support(ia))
            for (std::size_t ib = 0; ib < b.rows(); ++ib)
                for (std::size_t jb : b.row_support(ib))
                    out.set(ia * b.rows() + ib, ja * b.cols() + jb);
    return out;
}

BitMatrix assemble_blocks(const std::array<std::array<Block, 2>, 2>& layout) {
    auto name = [](std::size_t r, std::size_t c) {
        return "block (" + std::to_string(r) + ", " + std::to_string(c) + ")";
    };
    std::array<std::optional<std::size_t>, 2> heights;
    std::array<std::optional<std::size_t>, 2> widths;
    for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t c = 0; c < 2; ++c) {
            const Block& b = layout[r][c];
            if (!b) continue;
            if (heights[r] && *heights[r] != b->rows())
                throw DimensionError(name(r, c) + " has " + std::to_string(b->rows()) +
                                     " rows, expected " + std::to_string(*heights[r]));
            if (widths[c] && *widths[c] != b->cols())
                throw DimensionError(name(r, c) + " has " + std::to_string(b->cols()) +
                                     " columns, expected " + std::to_string(*widths[c]));
            heights[r] = b->rows();
            widths[c] = b->cols();
        }
    }
    for (std::size_t r = 0; r < 2; ++r)
        if (!heights[r]) throw DimensionError(name(r, 0) + ": block row height cannot be inferred");
    for (std::size_t c = 0; c < 2; ++c)
        if (!widths[c]) throw DimensionError(name(0, c) + ": block column width cannot be inferred");

    BitMatrix out(*heights[0] + *heights[1], *widths[0] + *widths[1]);
    std::size_t row_off = 0;
    for (std::size_t r = 0; r < 2; ++r) {
        std::size_t col_off = 0;
        for (std::size_t c = 0; c < 2; ++c) {
            if (const Block& b = layout[r][c]) {
                for (std::size_t i = 0; i < b->rows(); ++i)
                    for (std::size_t j : b->row_support(i)) out.set(row_off + i, col_off + j);
            }
            col_off += *widths[c];
        }
        row_off += *heights[r];
    }
    return out;
}

std::size_t suffix_weight(const BitMatrix& m, std::size_t i, std::size_t j) {
    if (i >= m.rows() || j > m.cols())
        throw IndexError("suffix weight at (" + std::to_string(i) + ", " + std::to_string(j) +
                         ") outside " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    std::size_t w = 0;
    for (std::size_t k = j; k < m.cols(); ++k) w += m.get(i, k) ? 1 : 0;
    return w;
}

std::vector<std::size_t> row_weights(const BitMatrix& m) {
    std::vector<std::size_t> out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) out[i] = m.row_weight(i);
    return out;
}

std::vector<std::size_t> col_weights(const BitMatrix& m) {
    std::vector<std::size_t> out(m.cols(), 0);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j : m.row_support(i)) ++out[j];
    return out;
}

BitMatrix submatrix(const BitMatrix& m, const SubSelection& sel) {
    for (std::size_t r : sel.row_ids)
        if (r >= m.rows()) throw IndexError("row index " + std::to_string(r) + " out of range");
    for (std::size_t c : sel.col_ids)
        if (c >= m.cols()) throw IndexError("column index " + std::to_string(c) + " out of range");
    BitMatrix out(sel.row_ids.size(), sel.col_ids.size());
    for (std::size_t i = 0; i < sel.row_ids.size(); ++i)
        for (std::size_t j = 0; j < sel.col_ids.size(); ++j)
            if (m.get(sel.row_ids[i], sel.col_ids[j])) out.set(i, j);
    return out;
}

BitVector row_sum(const BitMatrix& m, std::span<const std::size_t> rows,
                  std::span<const std::size_t> restrict_to) {
    BitVector out(restrict_to.size(), 0);
    for (std::size_t r : rows) {
        if (r >= m.rows()) throw IndexError("row index " + std::to_string(r) + " out of range");
        for (std::size_t k = 0; k < restrict_to.size(); ++k) {
            const std::size_t c = restrict_to[k];
            if (c >= m.cols())
                throw IndexError("column index " + std::to_string(c) + " out of range");
            out[k] ^= m.get(r, c) ? 1 : 0;
        }
    }
    return out;
}

bool in_kernel(const BitMatrix& m, std::span<const std::uint8_t> x) {
    for (std::uint8_t s : m.multiply(x))
        if (s) return false;
    return true;
}

}  // namespace ldpc_audit
