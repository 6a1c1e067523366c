#pragma once

#include "formality/algebra.hpp"

#include <unordered_map>

namespace formality {

/// Canonical monomial: (generator, exponent) pairs sorted by generator index.
/// Odd generators appear with exponent 1 only.
struct Monomial {
    std::vector<std::pair<uint32_t, uint32_t>> factors;

    bool empty() const { return factors.empty(); }
    uint32_t exponent(uint32_t gen) const;
    std::size_t length() const;
    friend bool operator==(const Monomial&, const Monomial&) = default;
};

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const;
};

/// Free graded-commutative algebra on bigraded generators, truncated at total
/// degree D, with ∂ and ∂̄ extended from the generators by the Leibniz rule.
class FreeCbba final : public Bicomplex {
public:
    explicit FreeCbba(Presentation pres);

    AlgebraKind kind() const override { return AlgebraKind::Free; }
    const Presentation& presentation() const override { return pres_; }
    int top_degree() const override { return D_; }
    std::size_t dim(Bidegree bd) const override;
    const SparseMatrix& del(Bidegree src) const override { return diff(del_, src, "del"); }
    const SparseMatrix& delbar(Bidegree src) const override { return diff(delbar_, src, "delbar"); }
    bool has_product() const override { return true; }
    SparseVec multiply(Bidegree a, const SparseVec& u, Bidegree b, const SparseVec& v) const override;
    std::string basis_label(Bidegree bd, uint32_t i) const override;

    std::size_t num_generators() const { return pres_.symbols.size(); }
    const Symbol& generator_symbol(uint32_t g) const { return pres_.symbols[g]; }
    bool odd(uint32_t g) const { return pres_.symbols[g].bd.parity() == 1; }
    Element generator(uint32_t g) const;
    const Element& generator_del(uint32_t g) const { return gen_del_[g]; }
    const Element& generator_delbar(uint32_t g) const { return gen_delbar_[g]; }
    /// Generators of a given bidegree / total degree, in declaration order.
    std::vector<uint32_t> generators_of(Bidegree bd) const;
    std::vector<uint32_t> generators_of_total(int t) const;

    /// Monomial basis of a slice: lexicographic in declaration order with
    /// larger exponents of earlier generators first.
    const std::vector<Monomial>& monomial_basis(Bidegree bd) const;
    std::optional<uint32_t> monomial_index(Bidegree bd, const Monomial& m) const;
    Bidegree monomial_bidegree(const Monomial& m) const;
    /// Product of canonical monomials with its Koszul sign; nullopt if zero.
    std::optional<std::pair<int, Monomial>> monomial_product(const Monomial& a, const Monomial& b) const;
    /// Coordinate of a single generator inside its slice.
    uint32_t generator_index(uint32_t g) const;

    /// Im ∂∂̄ ⊆ A⁺·A⁺ on generators.
    bool minimal() const { return minimal_; }
    const std::string& non_minimal_witness() const { return non_minimal_witness_; }

    /// Linear part of an element: coefficients of single-generator monomials.
    SparseVec linear_part(const Element& e) const;

private:
    const SparseMatrix& diff(const std::map<Bidegree, SparseMatrix>& m, Bidegree src, const char* which) const;
    Element poly_to_element(const Poly& p, const std::string& context) const;
    Element diff_monomial(const Monomial& m, bool bar) const;
    std::string monomial_label(const Monomial& m) const;

    Presentation pres_;
    int D_ = 0;
    std::vector<Element> gen_del_;
    std::vector<Element> gen_delbar_;
    std::map<Bidegree, std::vector<Monomial>> basis_;
    std::map<Bidegree, std::unordered_map<Monomial, uint32_t, MonomialHash>> index_;
    std::map<Bidegree, SparseMatrix> del_;
    std::map<Bidegree, SparseMatrix> delbar_;
    bool minimal_ = true;
    std::string non_minimal_witness_;
};

}  // namespace formality
