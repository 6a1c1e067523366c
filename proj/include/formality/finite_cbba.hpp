#pragma once

#include "formality/algebra.hpp"

namespace formality {

/// Finite-dimensional bicomplex given by an explicit basis, optionally with a
/// graded-commutative multiplication table (the "finite kind").
class FiniteCbba final : public Bicomplex {
public:
    explicit FiniteCbba(Presentation pres);

    AlgebraKind kind() const override { return AlgebraKind::Finite; }
    const Presentation& presentation() const override { return pres_; }
    int top_degree() const override { return top_; }
    std::size_t dim(Bidegree bd) const override;
    const SparseMatrix& del(Bidegree src) const override { return lookup(del_, src, kDel); }
    const SparseMatrix& delbar(Bidegree src) const override { return lookup(delbar_, src, kDelbar); }
    bool has_product() const override { return !pres_.mul.empty(); }
    SparseVec multiply(Bidegree a, const SparseVec& u, Bidegree b, const SparseVec& v) const override;
    std::string basis_label(Bidegree bd, uint32_t i) const override;

    /// Element for the i-th declared basis symbol.
    Element symbol(uint32_t i) const { return Element::basis(pres_.symbols[i].bd, slot_[i]); }
    uint32_t symbol_of(Bidegree bd, uint32_t i) const { return by_slice_.at(bd)[i]; }

private:
    const SparseMatrix& lookup(const std::map<Bidegree, SparseMatrix>& m, Bidegree src, Bidegree step) const;
    Element linear_poly(const Poly& p, Bidegree expected, const std::string& context) const;
    void check_product_axioms();

    Presentation pres_;
    int top_ = 0;
    std::vector<uint32_t> slot_;
    std::map<Bidegree, std::vector<uint32_t>> by_slice_;
    std::map<Bidegree, SparseMatrix> del_;
    std::map<Bidegree, SparseMatrix> delbar_;
    std::optional<uint32_t> unit_;
    /// table_[i][j] = product of symbols i and j (absent = 0).
    std::map<std::pair<uint32_t, uint32_t>, Element> table_;
};

}  // namespace formality
