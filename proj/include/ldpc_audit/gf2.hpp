#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ldpc_audit/bit_matrix.hpp"

namespace ldpc_audit {

/// Right null-space basis of a matrix.
struct KernelBasis {
    std::size_t dimension = 0;
    std::vector<BitVector> basis_vectors;
};

/// Reduced row echelon form with the pivot column of each nonzero row.
///
/// Gauss-Jordan with the pivot taken from the lowest-index row holding a one
/// in the current column, so the result is fully deterministic.
struct RowEchelon {
    BitMatrix reduced;
    std::vector<std::size_t> pivot_cols;
};

RowEchelon row_echelon(BitMatrix m);

std::size_t rank(const BitMatrix& m);

KernelBasis kernel_basis(const BitMatrix& m);

/// Left null-space basis: vectors y (length rows) with y^T M = 0.
/// The first vector is the one produced by the earliest zero row of the
/// elimination, which fixes the DECOMPOSE dependency choice.
std::vector<BitVector> left_kernel_basis(const BitMatrix& m);

BitMatrix kronecker(const BitMatrix& a, const BitMatrix& b);

/// One entry of a block layout; std::nullopt stands for a zero block whose
/// shape is inferred from its row and column neighbours.
using Block = std::optional<BitMatrix>;

/// Concatenates a 2x2 block layout [[top_left, top_right], [bottom_left,
/// bottom_right]]. Throws DimensionError naming the offending block when
/// heights disagree along a block row, widths disagree along a block column,
/// or a zero block's shape cannot be inferred.
BitMatrix assemble_blocks(const std::array<std::array<Block, 2>, 2>& layout);

/// Hamming weight of row i restricted to columns j..cols-1 (0-based).
/// j == cols is allowed and yields 0.
std::size_t suffix_weight(const BitMatrix& m, std::size_t i, std::size_t j);

std::vector<std::size_t> row_weights(const BitMatrix& m);
std::vector<std::size_t> col_weights(const BitMatrix& m);

BitMatrix submatrix(const BitMatrix& m, const SubSelection& sel);

/// GF(2) sum of the given rows, restricted to the given columns (result has
/// one entry per element of `restrict_to`, in that order).
BitVector row_sum(const BitMatrix& m, std::span<const std::size_t> rows,
                  std::span<const std::size_t> restrict_to);

/// True iff M x = 0.
bool in_kernel(const BitMatrix& m, std::span<const std::uint8_t> x);

}  // namespace ldpc_audit
