#pragma once

// Helpers shared by the splitting, ψ and promotion sources.

#include "formality/formality.hpp"

namespace formality::detail {

/// Basis vectors of every slice of fam at total degree t, as elements.
std::vector<Element> family_elements(const Bicomplex& a, const SliceFamily& fam, int t);

/// RREF-least coefficients c with sum c_j cols_j = target, all of total degree t.
std::optional<SparseVec> solve_combination(const Bicomplex& a, int t, const std::vector<Element>& cols,
                                           const Element& target);

Element combine(const std::vector<Element>& cols, const SparseVec& coeffs);

/// Elements of a pure slice given by coordinate vectors.
std::vector<Element> as_elements(Bidegree bd, const std::vector<SparseVec>& vs);

/// φ with ∂∂̄φ = target (target pure of bidegree bd); nullopt when none exists.
std::optional<Element> ddbar_primitive(const Bicomplex& a, const Element& target, Bidegree bd);

/// (α, β) with ∂α + ∂̄β = target at bd; nullopt when none exists.
std::optional<std::pair<Element, Element>> del_delbar_split(const Bicomplex& a, const Element& target, Bidegree bd);

/// Outcome of the two ideal conditions at one slice.
struct SliceCheck {
    Bidegree bd;
    std::size_t ideal_dim = 0;
    bool bc_ok = true;  // I ∩ ker∂ ∩ ker∂̄ ⊆ Im∂∂̄
    bool a_ok = true;   // I ∩ ker∂∂̄ ⊆ Im∂ + Im∂̄
    std::optional<Element> bc_witness;
    std::optional<Element> a_witness;
    std::vector<IdealWitness> witnesses;
};

/// Checks both conditions on every slice with total <= max_total, in parallel.
/// with_witnesses: also produce a primitive / (α, β) per basis vector.
std::vector<SliceCheck> check_ideal(const Bicomplex& a, const std::vector<Element>& n_gens, const SliceFamily& c,
                                    int max_total, bool with_witnesses);

}  // namespace formality::detail
