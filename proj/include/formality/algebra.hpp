#pragma once

#include "formality/bidegree.hpp"
#include "formality/linalg.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace formality {

enum class AlgebraKind { Free, Finite };

/// Scalar times a product of symbols, listed in written order (empty = unit).
struct Term {
    Scalar coef;
    std::vector<uint32_t> factors;
    friend bool operator==(const Term&, const Term&) = default;
};
using Poly = std::vector<Term>;

struct Symbol {
    std::string name;
    Bidegree bd;
    friend bool operator==(const Symbol&, const Symbol&) = default;
};

/// Raw, unchecked description of an algebra: generators (free kind) or basis
/// elements (finite kind) with differential and product assignments.
struct Presentation {
    std::string name;
    AlgebraKind kind = AlgebraKind::Free;
    std::optional<int> truncation;
    std::optional<int> sd_target;
    std::vector<Symbol> symbols;
    std::map<uint32_t, Poly> del;
    std::map<uint32_t, Poly> delbar;
    std::map<std::pair<uint32_t, uint32_t>, Poly> mul;

    std::optional<uint32_t> index_of(const std::string& name) const;
    uint32_t add_symbol(std::string name, Bidegree bd);
    /// Truncation actually used: explicit value, else 2n+2 from the SD target.
    std::optional<int> effective_truncation() const;

    friend bool operator==(const Presentation&, const Presentation&) = default;
};

/// Element of a bigraded space, stored as one sparse vector per bidegree.
class Element {
public:
    Element() = default;
    Element(Bidegree bd, SparseVec v);

    static Element basis(Bidegree bd, uint32_t i, Scalar c = 1) { return Element(bd, SparseVec::unit(i, std::move(c))); }

    bool is_zero() const { return parts_.empty(); }
    const std::map<Bidegree, SparseVec>& parts() const { return parts_; }
    const SparseVec& at(Bidegree bd) const;
    /// The bidegree if the element is nonzero and homogeneous.
    std::optional<Bidegree> bidegree() const;
    /// Component of the given bidegree as an element.
    Element component(Bidegree bd) const { return Element(bd, at(bd)); }

    Element& add(Bidegree bd, const SparseVec& v, const Scalar& c = 1);
    Element& axpy(const Scalar& c, const Element& o);
    Element& operator+=(const Element& o) { return axpy(1, o); }
    Element& operator-=(const Element& o) { return axpy(-1, o); }
    Element scaled(const Scalar& c) const;

    friend Element operator+(Element a, const Element& b) { return a += b; }
    friend Element operator-(Element a, const Element& b) { return a -= b; }
    friend Element operator*(const Scalar& c, const Element& e) { return e.scaled(c); }
    friend bool operator==(const Element&, const Element&) = default;

private:
    std::map<Bidegree, SparseVec> parts_;
};

/// Common read-only view of finite bicomplexes and truncated free cbbas: a
/// basis per bidegree, the matrices of ∂ and ∂̄, and (optionally) a product.
class Bicomplex {
public:
    virtual ~Bicomplex() = default;

    virtual AlgebraKind kind() const = 0;
    virtual const Presentation& presentation() const = 0;
    /// Highest total degree carrying basis elements (the truncation for free kind).
    virtual int top_degree() const = 0;
    virtual std::size_t dim(Bidegree bd) const = 0;
    /// ∂ : A^{src} -> A^{src+(1,0)}. Throws InsufficientTruncation when the target is cut off.
    virtual const SparseMatrix& del(Bidegree src) const = 0;
    virtual const SparseMatrix& delbar(Bidegree src) const = 0;
    virtual bool has_product() const = 0;
    /// Product of homogeneous vectors. Throws TruncationOverflow past the top degree.
    virtual SparseVec multiply(Bidegree a, const SparseVec& u, Bidegree b, const SparseVec& v) const = 0;
    virtual std::string basis_label(Bidegree bd, uint32_t i) const = 0;
    virtual std::optional<int> sd_target() const { return presentation().sd_target; }
    const std::string& name() const { return presentation().name; }

    /// Highest total degree whose differential is fully known.
    int diff_limit() const { return kind() == AlgebraKind::Free ? top_degree() - 1 : top_degree(); }

    /// Nonzero slices of total degree t, ordered by p.
    std::vector<Bidegree> slices(int t) const;
    /// ∂∂̄ : A^{tgt-(1,1)} -> A^{tgt}.
    SparseMatrix ddbar_into(Bidegree tgt) const;
    SparseMatrix ddbar_from(Bidegree src) const { return ddbar_into(src + kDdbar); }

    Element unit() const;
};

using BicomplexPtr = std::shared_ptr<const Bicomplex>;

/// Checks a presentation and returns the corresponding immutable algebra.
BicomplexPtr validate(const Presentation& pres);

Element del(const Bicomplex& a, const Element& e);
Element delbar(const Bicomplex& a, const Element& e);
Element d(const Bicomplex& a, const Element& e);
Element ddbar(const Bicomplex& a, const Element& e);
Element multiply(const Bicomplex& a, const Element& u, const Element& v);
/// Readable form, e.g. "x*x - 1/2*r".
std::string to_string(const Bicomplex& a, const Element& e);

/// Direct sum of the slices of one total degree, used for d and de Rham computations.
class TotalSpace {
public:
    TotalSpace(const Bicomplex& a, int t);

    int degree() const { return t_; }
    std::size_t dim() const { return dim_; }
    const std::vector<Bidegree>& slices() const { return slices_; }
    uint32_t offset(Bidegree bd) const;
    bool contains(Bidegree bd) const;

    SparseVec flatten(const Element& e) const;
    Element unflatten(const SparseVec& v) const;
    /// Coordinate subspace of one slice inside the total space.
    Subspace slice_subspace(Bidegree bd) const;

private:
    const Bicomplex* a_;
    int t_;
    std::size_t dim_ = 0;
    std::vector<Bidegree> slices_;
    std::vector<uint32_t> offsets_;
};

/// Matrix of d = ∂ + ∂̄ from total degree t to t+1.
SparseMatrix total_d(const Bicomplex& a, const TotalSpace& src, const TotalSpace& tgt);

}  // namespace formality
