#include "decwave/sparse.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <tuple>

#include "decwave/errors.hpp"

namespace decwave {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> entries)
    : rows_(rows), cols_(cols)
{
    for (const Triplet& t : entries)
        if (t.row >= rows || t.col >= cols)
            throw InvalidArgument("sparse entry (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                                  ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
    std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return std::tie(a.row, a.col) < std::tie(b.row, b.col);
    });
    offsets_.assign(rows + 1, 0);
    for (std::size_t i = 0; i < entries.size();) {
        std::size_t j = i;
        double sum = 0.0;
        while (j < entries.size() && entries[j].row == entries[i].row && entries[j].col == entries[i].col)
            sum += entries[j++].value;
        col_index_.push_back(entries[i].col);
        values_.push_back(sum);
        ++offsets_[entries[i].row + 1];
        i = j;
    }
    for (std::size_t r = 0; r < rows; ++r)
        offsets_[r + 1] += offsets_[r];
}

std::span<const std::size_t> SparseMatrix::row_cols(std::size_t r) const
{
    return std::span<const std::size_t>(col_index_).subspan(offsets_[r], offsets_[r + 1] - offsets_[r]);
}

std::span<const double> SparseMatrix::row_values(std::size_t r) const
{
    return std::span<const double>(values_).subspan(offsets_[r], offsets_[r + 1] - offsets_[r]);
}

double SparseMatrix::at(std::size_t r, std::size_t c) const
{
    const auto cs = row_cols(r);
    auto it = std::lower_bound(cs.begin(), cs.end(), c);
    if (it == cs.end() || *it != c)
        return 0.0;
    return row_values(r)[static_cast<std::size_t>(it - cs.begin())];
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const
{
    if (x.size() != cols_)
        throw InvalidArgument("sparse multiply: vector length " + std::to_string(x.size()) +
                              " does not match " + std::to_string(cols_) + " columns");
    std::vector<double> y(rows_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
        double sum = 0.0;
        for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k)
            sum += values_[k] * x[col_index_[k]];
        y[r] = sum;
    }
    return y;
}

SparseMatrix SparseMatrix::transpose() const
{
    std::vector<Triplet> t;
    t.reserve(values_.size());
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k)
            t.push_back({col_index_[k], r, values_[k]});
    return SparseMatrix(cols_, rows_, std::move(t));
}

SparseMatrix SparseMatrix::scale_rows(std::span<const double> scale) const
{
    if (scale.size() != rows_)
        throw InvalidArgument("scale_rows: length mismatch");
    SparseMatrix out = *this;
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k)
            out.values_[k] *= scale[r];
    return out;
}

std::vector<Triplet> SparseMatrix::triplets() const
{
    std::vector<Triplet> t;
    t.reserve(values_.size());
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k)
            t.push_back({r, col_index_[k], values_[k]});
    return t;
}

SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b)
{
    if (a.cols() != b.rows())
        throw InvalidArgument("sparse product: inner dimensions differ");
    std::vector<Triplet> out;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        std::map<std::size_t, double> acc;
        const auto ac = a.row_cols(r);
        const auto av = a.row_values(r);
        for (std::size_t i = 0; i < ac.size(); ++i) {
            const auto bc = b.row_cols(ac[i]);
            const auto bv = b.row_values(ac[i]);
            for (std::size_t j = 0; j < bc.size(); ++j)
                acc[bc[j]] += av[i] * bv[j];
        }
        for (const auto& [c, v] : acc)
            out.push_back({r, c, v});
    }
    return SparseMatrix(a.rows(), b.cols(), std::move(out));
}

} // namespace decwave
