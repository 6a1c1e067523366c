#pragma once

#include "formality/algebra.hpp"

namespace formality {

enum class CohomologyKind { BottChern, Aeppli, Dolbeault, AntiDolbeault, DeRham };

const char* cohomology_kind_name(CohomologyKind k);
std::optional<CohomologyKind> parse_cohomology_kind(const std::string& s);

// Subspaces of one slice A^{bd}.
Subspace ker_del(const Bicomplex& a, Bidegree bd);
Subspace ker_delbar(const Bicomplex& a, Bidegree bd);
Subspace ker_del_delbar(const Bicomplex& a, Bidegree bd);
Subspace ker_ddbar(const Bicomplex& a, Bidegree bd);
Subspace im_del(const Bicomplex& a, Bidegree bd);
Subspace im_delbar(const Bicomplex& a, Bidegree bd);
Subspace im_ddbar(const Bicomplex& a, Bidegree bd);
Subspace im_del_plus_delbar(const Bicomplex& a, Bidegree bd);

struct CohomologySpace {
    CohomologyKind kind;
    Bidegree bd;  // for de Rham only bd.total() is meaningful (bd = (t, 0))
    int total = 0;
    Quotient quotient;
    std::vector<Element> representatives;

    std::size_t dim() const { return representatives.size(); }
    /// Class coordinates of a closed element, nullopt if it is not closed.
    std::optional<std::vector<Scalar>> coordinates(const Bicomplex& a, const Element& e) const;
};

/// Throws InsufficientTruncation when the exactness/closure data would need
/// monomials beyond the truncation.
CohomologySpace cohomology(const Bicomplex& a, CohomologyKind kind, Bidegree bd);
CohomologySpace de_rham(const Bicomplex& a, int t);

/// Highest total degree at which the kind is computable (finite kind: top degree).
int cohomology_limit(const Bicomplex& a, CohomologyKind kind);

struct PairingBlock {
    Bidegree bc;  // H_BC^{bc} x H_A^{(n,n)-bc}
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::vector<Scalar>> matrix;
    bool perfect = false;
};

struct PairingReport {
    int n = 0;
    bool holds = false;
    std::string failure;              // empty when holds
    std::optional<Bidegree> failing;  // first failing bidegree
    std::string witness;              // a class that is nonzero where it must vanish, or unpaired
    std::optional<Element> omega;     // representative of the chosen H_A^{n,n} generator
    std::vector<PairingBlock> blocks;
    std::vector<Bidegree> vanishing_checked;
};

/// n-Serre-duality: vanishing outside [0,n]^2, H_A^{n,n} one-dimensional, and
/// perfect pairings H_BC^{p,q} x H_A^{n-p,n-q} -> H_A^{n,n}.
PairingReport pairing_check(const Bicomplex& a, int n);

struct ZigzagShape {
    enum class Kind { Dot, Square, Zigzag } kind;
    Bidegree anchor;
    /// Zigzags: the bidegrees along the shape and one arrow letter between
    /// neighbours, 'd' for ∂ and 'b' for ∂̄.
    std::vector<Bidegree> nodes;
    std::string word;
    std::size_t multiplicity = 1;

    std::string describe() const;
};

struct ZigzagDecomposition {
    std::vector<ZigzagShape> shapes;
    bool only_dots_and_squares() const;
    /// Dimension contributed at each bidegree (equals the bicomplex dimension).
    std::map<Bidegree, std::size_t> dims() const;
    /// Dimensions of H_BC and H_A predicted by the shape inventory.
    std::map<Bidegree, std::size_t> predicted_bc() const;
    std::map<Bidegree, std::size_t> predicted_aeppli() const;
};

/// Finite bicomplexes only; free truncated algebras are rejected.
ZigzagDecomposition zigzag_decompose(const Bicomplex& a);

}  // namespace formality
