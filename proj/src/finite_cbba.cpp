#include "formality/finite_cbba.hpp"

namespace formality {

FiniteCbba::FiniteCbba(Presentation pres) : pres_(std::move(pres))
{
    const uint32_t n = static_cast<uint32_t>(pres_.symbols.size());
    slot_.resize(n);
    for (uint32_t i = 0; i < n; ++i) {
        const auto& s = pres_.symbols[i];
        if (!s.bd.valid())
            throw Error(ErrorKind::GradingViolation, "basis element " + s.name + " has a negative bidegree", s.name);
        auto& list = by_slice_[s.bd];
        slot_[i] = static_cast<uint32_t>(list.size());
        list.push_back(i);
        top_ = std::max(top_, s.bd.total());
    }
    if (!pres_.mul.empty()) {
        auto units = by_slice_.find({0, 0});
        if (units == by_slice_.end() || units->second.size() != 1)
            throw Error(ErrorKind::ProductAxiomViolation, "a product needs exactly one basis element of bidegree (0,0) as unit");
        unit_ = units->second[0];
    }

    for (auto [ops, mats, step, op] : {std::tuple{&pres_.del, &del_, kDel, "del"}, std::tuple{&pres_.delbar, &delbar_, kDelbar, "delbar"}}) {
        std::map<uint32_t, Element> images;
        for (const auto& [i, poly] : *ops) {
            if (i >= n)
                throw Error(ErrorKind::UnknownReference, std::string(op) + " assigned to unknown basis element");
            images[i] = linear_poly(poly, pres_.symbols[i].bd + step, std::string(op) + " " + pres_.symbols[i].name);
        }
        for (int t = -1; t <= top_; ++t) {
            for (int p = -1; p <= t + 1; ++p) {
                Bidegree src{p, t - p}, tgt = src + step;
                std::vector<SparseVec> cols;
                if (auto it = by_slice_.find(src); it != by_slice_.end())
                    for (uint32_t s : it->second)
                        cols.push_back(images.count(s) ? images[s].at(tgt) : SparseVec{});
                (*mats)[src] = SparseMatrix::from_columns(dim(tgt), cols);
            }
        }
    }

    for (const auto& [bd, syms] : by_slice_) {
        auto check = [&](const SparseMatrix& m, const char* what) {
            auto cols = m.columns();
            for (std::size_t c = 0; c < cols.size(); ++c)
                if (!cols[c].empty())
                    throw Error(ErrorKind::NonSquareZero, std::string(what) + " does not vanish on " + pres_.symbols[syms[c]].name,
                                pres_.symbols[syms[c]].name);
        };
        check(del(bd + kDel) * del(bd), "del del");
        check(delbar(bd + kDelbar) * delbar(bd), "delbar delbar");
        SparseMatrix anti = del(bd + kDelbar) * delbar(bd);
        SparseMatrix other = delbar(bd + kDel) * del(bd);
        std::vector<SparseVec> sum_cols;
        auto ca = anti.columns(), cb = other.columns();
        for (std::size_t c = 0; c < ca.size(); ++c)
            sum_cols.push_back(ca[c] + cb[c]);
        check(SparseMatrix::from_columns(anti.rows(), sum_cols), "del delbar + delbar del");
    }

    if (unit_)
        check_product_axioms();
}

void FiniteCbba::check_product_axioms()
{
    const uint32_t n = static_cast<uint32_t>(pres_.symbols.size());
    auto name = [&](uint32_t i) { return pres_.symbols[i].name; };
    auto bd = [&](uint32_t i) { return pres_.symbols[i].bd; };

    std::map<std::pair<uint32_t, uint32_t>, Element> declared;
    for (const auto& [key, poly] : pres_.mul) {
        auto [i, j] = key;
        if (i >= n || j >= n)
            throw Error(ErrorKind::UnknownReference, "mul references an unknown basis element");
        declared[key] = linear_poly(poly, bd(i) + bd(j), "mul " + name(i) + " " + name(j));
    }
    for (uint32_t i = 0; i < n; ++i) {
        table_[{*unit_, i}] = symbol(i);
        table_[{i, *unit_}] = symbol(i);
    }
    for (const auto& [key, val] : declared) {
        auto [i, j] = key;
        std::string where = name(i) + "*" + name(j);
        if (auto it = table_.find(key); it != table_.end() && it->second != val)
            throw Error(ErrorKind::ProductAxiomViolation, "product " + where + " contradicts the unit or commutativity", where);
        Element swapped = (bd(i).parity() && bd(j).parity()) ? val.scaled(-1) : val;
        if (auto it = table_.find({j, i}); it != table_.end() && it->second != swapped)
            throw Error(ErrorKind::ProductAxiomViolation, "product " + where + " is not graded-commutative", where);
        table_[key] = val;
        table_[{j, i}] = swapped;
    }
    for (auto it = table_.begin(); it != table_.end();)
        it = it->second.is_zero() ? table_.erase(it) : std::next(it);

    auto prod = [&](const Element& u, const Element& v) { return formality::multiply(*this, u, v); };
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t j = 0; j < n; ++j) {
            Element ij = prod(symbol(i), symbol(j));
            for (uint32_t k = 0; k < n; ++k)
                if (prod(ij, symbol(k)) != prod(symbol(i), prod(symbol(j), symbol(k))))
                    throw Error(ErrorKind::ProductAxiomViolation, "product is not associative",
                                name(i) + "*" + name(j) + "*" + name(k));
            Scalar sign = bd(i).parity() ? Scalar(-1) : Scalar(1);
            Element lhs = formality::del(*this, ij);
            Element rhs = prod(formality::del(*this, symbol(i)), symbol(j)) + sign * prod(symbol(i), formality::del(*this, symbol(j)));
            if (lhs != rhs)
                throw Error(ErrorKind::LeibnizViolation, "del fails the Leibniz rule", name(i) + "*" + name(j));
            lhs = formality::delbar(*this, ij);
            rhs = prod(formality::delbar(*this, symbol(i)), symbol(j)) + sign * prod(symbol(i), formality::delbar(*this, symbol(j)));
            if (lhs != rhs)
                throw Error(ErrorKind::LeibnizViolation, "delbar fails the Leibniz rule", name(i) + "*" + name(j));
        }
}

std::size_t FiniteCbba::dim(Bidegree bd) const
{
    auto it = by_slice_.find(bd);
    return it == by_slice_.end() ? 0 : it->second.size();
}

const SparseMatrix& FiniteCbba::lookup(const std::map<Bidegree, SparseMatrix>& m, Bidegree src, Bidegree step) const
{
    auto it = m.find(src);
    if (it != m.end())
        return it->second;
    if (dim(src) != 0 || dim(src + step) != 0)
        throw std::logic_error("missing differential block at " + src.to_string());
    static const SparseMatrix empty;
    return empty;
}

SparseVec FiniteCbba::multiply(Bidegree a, const SparseVec& u, Bidegree b, const SparseVec& v) const
{
    if (!unit_)
        throw Error(ErrorKind::UnsupportedInput, "bicomplex '" + pres_.name + "' has no multiplication");
    Bidegree c = a + b;
    SparseVec out;
    if (u.empty() || v.empty() || dim(c) == 0)
        return out;
    const auto& sa = by_slice_.at(a);
    const auto& sb = by_slice_.at(b);
    for (const auto& [i, x] : u.entries())
        for (const auto& [j, y] : v.entries()) {
            auto it = table_.find({sa[i], sb[j]});
            if (it != table_.end())
                out.axpy(x * y, it->second.at(c));
        }
    return out;
}

std::string FiniteCbba::basis_label(Bidegree bd, uint32_t i) const
{
    uint32_t s = by_slice_.at(bd).at(i);
    return unit_ && s == *unit_ ? "1" : pres_.symbols[s].name;
}

Element FiniteCbba::linear_poly(const Poly& p, Bidegree expected, const std::string& context) const
{
    Element out;
    for (const auto& term : p) {
        uint32_t s;
        if (term.factors.empty()) {
            if (!unit_)
                throw Error(ErrorKind::GradingViolation, context + " has a scalar term but there is no unit");
            s = *unit_;
        } else if (term.factors.size() == 1) {
            s = term.factors[0];
        } else {
            throw Error(ErrorKind::GradingViolation, context + " must be linear in basis elements");
        }
        if (s >= pres_.symbols.size())
            throw Error(ErrorKind::UnknownReference, context + " references an unknown basis element");
        if (pres_.symbols[s].bd != expected)
            throw Error(ErrorKind::GradingViolation,
                        context + " has a term of bidegree " + pres_.symbols[s].bd.to_string() + ", expected " + expected.to_string(),
                        pres_.symbols[s].name);
        out.add(expected, SparseVec::unit(slot_[s]), term.coef);
    }
    return out;
}

}  // namespace formality
