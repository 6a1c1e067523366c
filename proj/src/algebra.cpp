#include "formality/algebra.hpp"
#include "formality/finite_cbba.hpp"
#include "formality/free_cbba.hpp"

namespace formality {

const char* error_kind_name(ErrorKind k)
{
    switch (k) {
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::UnknownReference: return "UnknownReference";
    case ErrorKind::UnknownCorpusEntry: return "UnknownCorpusEntry";
    case ErrorKind::NonSquareZero: return "NonSquareZero";
    case ErrorKind::LeibnizViolation: return "LeibnizViolation";
    case ErrorKind::GradingViolation: return "GradingViolation";
    case ErrorKind::NonNilpotentOrder: return "NonNilpotentOrder";
    case ErrorKind::ProductAxiomViolation: return "ProductAxiomViolation";
    case ErrorKind::TruncationOverflow: return "TruncationOverflow";
    case ErrorKind::InsufficientTruncation: return "InsufficientTruncation";
    case ErrorKind::NoSolution: return "NoSolution";
    case ErrorKind::DdbarWitnessMissing: return "DdbarWitnessMissing";
    case ErrorKind::SplittingObstructed: return "SplittingObstructed";
    case ErrorKind::MorphismViolation: return "MorphismViolation";
    case ErrorKind::HypothesesUnmet: return "HypothesesUnmet";
    case ErrorKind::InternalContradiction: return "InternalContradiction";
    case ErrorKind::PairingSingular: return "PairingSingular";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::PromotionObstructed: return "PromotionObstructed";
    case ErrorKind::WidthViolated: return "WidthViolated";
    case ErrorKind::SpecialBranchInconsistent: return "SpecialBranchInconsistent";
    case ErrorKind::TargetNotDdbar: return "TargetNotDdbar";
    case ErrorKind::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorKind::RestrictionContractViolated: return "RestrictionContractViolated";
    case ErrorKind::UnsupportedInput: return "UnsupportedInput";
    }
    return "Error";
}

std::optional<uint32_t> Presentation::index_of(const std::string& n) const
{
    for (uint32_t i = 0; i < symbols.size(); ++i)
        if (symbols[i].name == n)
            return i;
    return std::nullopt;
}

uint32_t Presentation::add_symbol(std::string n, Bidegree bd)
{
    if (index_of(n))
        throw Error(ErrorKind::DuplicateName, "symbol '" + n + "' declared twice", n);
    symbols.push_back({std::move(n), bd});
    return static_cast<uint32_t>(symbols.size() - 1);
}

std::optional<int> Presentation::effective_truncation() const
{
    if (truncation)
        return truncation;
    if (sd_target)
        return 2 * *sd_target + 2;
    return std::nullopt;
}

// Element

Element::Element(Bidegree bd, SparseVec v)
{
    if (!v.empty())
        parts_.emplace(bd, std::move(v));
}

const SparseVec& Element::at(Bidegree bd) const
{
    static const SparseVec empty;
    auto it = parts_.find(bd);
    return it == parts_.end() ? empty : it->second;
}

std::optional<Bidegree> Element::bidegree() const
{
    if (parts_.size() != 1)
        return std::nullopt;
    return parts_.begin()->first;
}

Element& Element::add(Bidegree bd, const SparseVec& v, const Scalar& c)
{
    if (v.empty() || c.is_zero())
        return *this;
    auto& slot = parts_[bd];
    slot.axpy(c, v);
    if (slot.empty())
        parts_.erase(bd);
    return *this;
}

Element& Element::axpy(const Scalar& c, const Element& o)
{
    for (const auto& [bd, v] : o.parts_)
        add(bd, v, c);
    return *this;
}

Element Element::scaled(const Scalar& c) const
{
    Element out;
    if (c.is_zero())
        return out;
    out.parts_ = parts_;
    for (auto& [bd, v] : out.parts_)
        v.scale(c);
    return out;
}

// Bicomplex helpers

std::vector<Bidegree> Bicomplex::slices(int t) const
{
    std::vector<Bidegree> out;
    for (int p = 0; p <= t; ++p)
        if (dim({p, t - p}) > 0)
            out.push_back({p, t - p});
    return out;
}

SparseMatrix Bicomplex::ddbar_into(Bidegree tgt) const
{
    Bidegree src = tgt - kDdbar;
    if (!src.valid() || dim(src) == 0)
        return SparseMatrix(dim(tgt), 0);
    return del(src + kDelbar) * delbar(src);
}

Element Bicomplex::unit() const
{
    if (dim({0, 0}) == 0)
        throw Error(ErrorKind::UnsupportedInput, "algebra has no unit");
    return Element::basis({0, 0}, 0);
}

BicomplexPtr validate(const Presentation& pres)
{
    if (pres.kind == AlgebraKind::Free)
        return std::make_shared<FreeCbba>(pres);
    return std::make_shared<FiniteCbba>(pres);
}

namespace {

template <typename F>
Element apply_each(const Element& e, F&& f)
{
    Element out;
    for (const auto& [bd, v] : e.parts())
        f(out, bd, v);
    return out;
}

}  // namespace

Element del(const Bicomplex& a, const Element& e)
{
    return apply_each(e, [&](Element& out, Bidegree bd, const SparseVec& v) { out.add(bd + kDel, a.del(bd).apply(v)); });
}

Element delbar(const Bicomplex& a, const Element& e)
{
    return apply_each(e, [&](Element& out, Bidegree bd, const SparseVec& v) {
        out.add(bd + kDelbar, a.delbar(bd).apply(v));
    });
}

Element d(const Bicomplex& a, const Element& e) { return del(a, e) + delbar(a, e); }

Element ddbar(const Bicomplex& a, const Element& e) { return del(a, delbar(a, e)); }

Element multiply(const Bicomplex& a, const Element& u, const Element& v)
{
    Element out;
    for (const auto& [bu, x] : u.parts())
        for (const auto& [bv, y] : v.parts())
            out.add(bu + bv, a.multiply(bu, x, bv, y));
    return out;
}

std::string to_string(const Bicomplex& a, const Element& e)
{
    std::string out;
    for (const auto& [bd, v] : e.parts()) {
        for (const auto& [i, c] : v.entries()) {
            std::string label = a.basis_label(bd, i);
            bool unit = label == "1";
            std::string coef;
            bool neg = false;
            Scalar cc = c;
            if (sgn(c.re()) < 0 || (sgn(c.re()) == 0 && sgn(c.im()) < 0)) {
                neg = true;
                cc = -c;
            }
            if (!cc.is_one() || unit) {
                coef = cc.to_string();
                if (!cc.is_real() && sgn(cc.re()) != 0)
                    coef = "(" + coef + ")";
            }
            std::string term = unit ? coef : (coef.empty() ? label : coef + "*" + label);
            if (out.empty())
                out = neg ? "-" + term : term;
            else
                out += (neg ? " - " : " + ") + term;
        }
    }
    return out.empty() ? "0" : out;
}

// TotalSpace

TotalSpace::TotalSpace(const Bicomplex& a, int t) : a_(&a), t_(t)
{
    if (t < 0)
        return;
    for (Bidegree bd : a.slices(t)) {
        slices_.push_back(bd);
        offsets_.push_back(static_cast<uint32_t>(dim_));
        dim_ += a.dim(bd);
    }
}

bool TotalSpace::contains(Bidegree bd) const
{
    for (Bidegree s : slices_)
        if (s == bd)
            return true;
    return false;
}

uint32_t TotalSpace::offset(Bidegree bd) const
{
    for (std::size_t k = 0; k < slices_.size(); ++k)
        if (slices_[k] == bd)
            return offsets_[k];
    throw std::out_of_range("bidegree " + bd.to_string() + " not in total degree " + std::to_string(t_));
}

SparseVec TotalSpace::flatten(const Element& e) const
{
    SparseVec out;
    for (const auto& [bd, v] : e.parts()) {
        if (bd.total() != t_)
            throw std::invalid_argument("element component outside total degree");
        uint32_t off = offset(bd);
        for (const auto& [i, c] : v.entries())
            out.push_back(off + i, c);
    }
    return out;
}

Element TotalSpace::unflatten(const SparseVec& v) const
{
    Element out;
    std::size_t k = 0;
    std::map<Bidegree, SparseVec> parts;
    for (const auto& [i, c] : v.entries()) {
        while (k + 1 < slices_.size() && i >= offsets_[k + 1])
            ++k;
        parts[slices_[k]].push_back(i - offsets_[k], c);
    }
    for (auto& [bd, sv] : parts)
        out.add(bd, sv);
    return out;
}

Subspace TotalSpace::slice_subspace(Bidegree bd) const
{
    std::vector<SparseVec> units;
    if (contains(bd)) {
        uint32_t off = offset(bd);
        for (uint32_t i = 0; i < a_->dim(bd); ++i)
            units.push_back(SparseVec::unit(off + i));
    }
    return Subspace::span(dim_, units);
}

SparseMatrix total_d(const Bicomplex& a, const TotalSpace& src, const TotalSpace& tgt)
{
    SparseMatrix m(tgt.dim(), src.dim());
    auto place = [&](const SparseMatrix& block, Bidegree from, Bidegree to) {
        if (!tgt.contains(to) || !src.contains(from))
            return;
        uint32_t ro = tgt.offset(to), co = src.offset(from);
        for (std::size_t r = 0; r < block.rows(); ++r) {
            if (block.row(r).empty())
                continue;
            SparseVec shifted;
            for (const auto& [c, v] : block.row(r).entries())
                shifted.push_back(co + c, v);
            m.row_mut(ro + r).axpy(1, shifted);
        }
    };
    for (Bidegree s : src.slices()) {
        place(a.del(s), s, s + kDel);
        place(a.delbar(s), s, s + kDelbar);
    }
    return m;
}

}  // namespace formality
