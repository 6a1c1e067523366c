#pragma once

#include "formality/scalar.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace formality {

/// Sparse vector with sorted indices and no stored zeros.
class SparseVec {
public:
    using Entry = std::pair<uint32_t, Scalar>;

    SparseVec() = default;
    static SparseVec unit(uint32_t i, Scalar v = 1);
    static SparseVec from_dense(std::span<const Scalar> dense);

    bool empty() const { return entries_.empty(); }
    std::size_t nnz() const { return entries_.size(); }
    const std::vector<Entry>& entries() const { return entries_; }
    uint32_t leading() const { return entries_.front().first; }

    const Scalar* find(uint32_t i) const;
    Scalar at(uint32_t i) const;

    /// Appends an entry; indices must arrive strictly increasing.
    void push_back(uint32_t i, Scalar v);
    void set(uint32_t i, Scalar v);

    /// this += a * x
    void axpy(const Scalar& a, const SparseVec& x);
    void scale(const Scalar& a);
    SparseVec scaled(const Scalar& a) const;
    /// Largest index + 1, or 0.
    uint32_t extent() const { return entries_.empty() ? 0 : entries_.back().first + 1; }

    friend SparseVec operator+(SparseVec a, const SparseVec& b) { a.axpy(1, b); return a; }
    friend SparseVec operator-(SparseVec a, const SparseVec& b) { a.axpy(-1, b); return a; }
    friend bool operator==(const SparseVec&, const SparseVec&) = default;

private:
    std::vector<Entry> entries_;
};

/// Row-major sparse matrix. Linear maps act on column vectors: y = M x.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows) {}

    static SparseMatrix identity(std::size_t n);
    static SparseMatrix from_dense(const std::vector<std::vector<Scalar>>& rows);
    /// Builds the matrix whose j-th column is cols[j].
    static SparseMatrix from_columns(std::size_t rows, const std::vector<SparseVec>& cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const SparseVec& row(std::size_t r) const { return data_[r]; }
    SparseVec& row_mut(std::size_t r) { return data_[r]; }
    Scalar at(std::size_t r, std::size_t c) const { return data_[r].at(static_cast<uint32_t>(c)); }
    void set(std::size_t r, std::size_t c, Scalar v);

    SparseMatrix transpose() const;
    std::vector<SparseVec> columns() const { return transpose().data_; }
    SparseVec apply(const SparseVec& x) const;
    SparseMatrix operator*(const SparseMatrix& o) const;
    bool is_zero() const;

    friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<SparseVec> data_;
};

/// Incremental reduced row echelon form. Optionally remembers, for every
/// row, the combination of inserted vectors it equals, which turns the
/// structure into a solver for "which combination of inputs gives v".
class Echelon {
public:
    explicit Echelon(std::size_t ambient, bool track = false) : ambient_(ambient), track_(track) {}

    std::size_t ambient() const { return ambient_; }
    std::size_t rank() const { return rows_.size(); }
    std::size_t inserted() const { return inserted_; }
    const std::vector<SparseVec>& rows() const& { return rows_; }
    std::vector<SparseVec> rows() && { return std::move(rows_); }
    const std::vector<uint32_t>& pivots() const { return pivots_; }

    /// Residual of v modulo the row space. With tracking, `comb` receives the
    /// combination of inserted vectors that was subtracted.
    SparseVec reduce(const SparseVec& v, SparseVec* comb = nullptr) const;
    bool contains(const SparseVec& v) const { return reduce(v).empty(); }

    /// Inserts v (index = number of previous inserts). Returns true when v
    /// was independent. Dependent inserts record a kernel relation when tracking.
    bool insert(const SparseVec& v);

    /// For tracked echelons: relations sum_j c_j * input_j = 0, one per dependent insert.
    const std::vector<SparseVec>& relations() const { return relations_; }

    /// Combination of inputs equal to v, or nullopt if v is outside the span.
    std::optional<SparseVec> express(const SparseVec& v) const;

private:
    std::optional<std::size_t> row_of_pivot(uint32_t col) const;

    std::size_t ambient_;
    bool track_;
    std::size_t inserted_ = 0;
    std::vector<SparseVec> rows_;
    std::vector<uint32_t> pivots_;
    std::vector<SparseVec> combs_;
    std::vector<SparseVec> relations_;
};

struct RrefResult {
    SparseMatrix rref;
    std::vector<std::size_t> pivots;
    std::size_t rank() const { return pivots.size(); }
};

/// Reduced row echelon form; zero rows are moved to the bottom.
RrefResult rref(const SparseMatrix& m);

/// Solution of m x = b with free variables zero, or nullopt if inconsistent.
/// Throws std::invalid_argument on dimension mismatch.
std::optional<SparseVec> solve(const SparseMatrix& m, const SparseVec& b);

/// Basis of ker(m), one vector per free column, in RREF.
std::vector<SparseVec> kernel_basis(const SparseMatrix& m);

/// Linear subspace of Q(i)^ambient stored by its unique RREF basis.
class Subspace {
public:
    Subspace() = default;
    explicit Subspace(std::size_t ambient) : ambient_(ambient) {}
    static Subspace span(std::size_t ambient, std::span<const SparseVec> vectors);
    static Subspace full(std::size_t ambient);
    static Subspace from_echelon(const Echelon& e);

    std::size_t ambient() const { return ambient_; }
    std::size_t dim() const { return basis_.size(); }
    bool is_zero() const { return basis_.empty(); }
    const std::vector<SparseVec>& basis() const& { return basis_; }
    std::vector<SparseVec> basis() && { return std::move(basis_); }
    const std::vector<uint32_t>& pivots() const { return pivots_; }

    SparseVec reduce(const SparseVec& v) const;
    bool contains(const SparseVec& v) const { return reduce(v).empty(); }
    bool contains(const Subspace& other) const;

    friend bool operator==(const Subspace&, const Subspace&) = default;

private:
    std::size_t ambient_ = 0;
    std::vector<SparseVec> basis_;
    std::vector<uint32_t> pivots_;
};

Subspace sum(const Subspace& a, const Subspace& b);
/// Zassenhaus intersection.
Subspace intersect(const Subspace& a, const Subspace& b);
/// Coset representatives of a/(a∩b): greedily the earliest RREF basis vectors of
/// `a` independent of b and of the previously chosen ones. For a = ambient these
/// are the lexicographically least standard basis vectors.
std::vector<SparseVec> quotient_basis(const Subspace& a, const Subspace& b);

/// Fixed basis for a quotient space Z/B (B ⊆ Z) with coordinate extraction.
class Quotient {
public:
    Quotient() : echelon_(0, true) {}
    Quotient(const Subspace& cycles, const Subspace& boundaries);

    std::size_t dim() const { return reps_.size(); }
    const std::vector<SparseVec>& representatives() const { return reps_; }
    const Subspace& boundaries() const { return boundaries_; }
    /// Class coordinates of v in the representative basis; nullopt if v is not in Z.
    std::optional<std::vector<Scalar>> coordinates(const SparseVec& v) const;
    bool is_trivial(const SparseVec& v) const { return boundaries_.contains(v); }

private:
    std::vector<SparseVec> reps_;
    Subspace boundaries_;
    Echelon echelon_;
};

}  // namespace formality
