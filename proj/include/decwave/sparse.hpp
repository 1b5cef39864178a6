#ifndef DECWAVE_SPARSE_HPP
#define DECWAVE_SPARSE_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace decwave {

struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

/// Compressed-row sparse matrix. Column indices are sorted within each row
/// and duplicates are summed on construction.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nonzeros() const { return values_.size(); }

    std::span<const std::size_t> row_cols(std::size_t r) const;
    std::span<const double> row_values(std::size_t r) const;

    /// Entry (r, c), zero when not stored.
    double at(std::size_t r, std::size_t c) const;

    std::vector<double> multiply(std::span<const double> x) const;
    SparseMatrix transpose() const;
    /// Returns diag(scale) * this.
    SparseMatrix scale_rows(std::span<const double> scale) const;

    /// Entries in row-major order.
    std::vector<Triplet> triplets() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> offsets_{0};
    std::vector<std::size_t> col_index_;
    std::vector<double> values_;
};

SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b);

} // namespace decwave

#endif
