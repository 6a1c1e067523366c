#include "formality/free_cbba.hpp"
#include "formality/parallel.hpp"

#include <functional>

namespace formality {

uint32_t Monomial::exponent(uint32_t gen) const
{
    for (const auto& [g, e] : factors)
        if (g == gen)
            return e;
    return 0;
}

std::size_t Monomial::length() const
{
    std::size_t n = 0;
    for (const auto& f : factors)
        n += f.second;
    return n;
}

std::size_t MonomialHash::operator()(const Monomial& m) const
{
    std::size_t h = 1469598103934665603ull;
    for (const auto& [g, e] : m.factors) {
        h = (h ^ g) * 1099511628211ull;
        h = (h ^ e) * 1099511628211ull;
    }
    return h;
}

FreeCbba::FreeCbba(Presentation pres) : pres_(std::move(pres))
{
    auto D = pres_.effective_truncation();
    if (!D)
        throw Error(ErrorKind::InsufficientTruncation, "free algebra '" + pres_.name + "' needs a truncation or sd-target");
    D_ = *D;
    if (D_ < 1)
        throw Error(ErrorKind::InsufficientTruncation, "truncation must be at least 1");

    for (const auto& s : pres_.symbols) {
        if (!s.bd.valid() || s.bd.total() < 1)
            throw Error(ErrorKind::GradingViolation, "generator " + s.name + " must have p,q >= 0 and positive total degree", s.name);
        if (s.bd.total() > D_)
            throw Error(ErrorKind::TruncationOverflow, "generator " + s.name + " lies above the truncation", s.name);
    }

    // Monomial enumeration: the depth-first order, with exponents of earlier
    // generators descending, is already the basis order inside each slice.
    const uint32_t G = static_cast<uint32_t>(pres_.symbols.size());
    Monomial cur;
    std::function<void(uint32_t, Bidegree)> rec = [&](uint32_t g, Bidegree bd) {
        if (g == G) {
            auto& b = basis_[bd];
            index_[bd].emplace(cur, static_cast<uint32_t>(b.size()));
            b.push_back(cur);
            return;
        }
        Bidegree gb = pres_.symbols[g].bd;
        int room = (D_ - bd.total()) / gb.total();
        int maxe = odd(g) ? std::min(room, 1) : room;
        for (int e = maxe; e >= 0; --e) {
            if (e > 0)
                cur.factors.emplace_back(g, e);
            rec(g + 1, {bd.p + e * gb.p, bd.q + e * gb.q});
            if (e > 0)
                cur.factors.pop_back();
        }
    };
    rec(0, {0, 0});

    gen_del_.resize(G);
    gen_delbar_.resize(G);
    auto assign = [&](const std::map<uint32_t, Poly>& src, std::vector<Element>& dst, Bidegree step, const char* op) {
        for (const auto& [g, poly] : src) {
            if (g >= G)
                throw Error(ErrorKind::UnknownReference, std::string(op) + " assigned to unknown generator");
            const auto& sym = pres_.symbols[g];
            std::string ctx = std::string(op) + " " + sym.name;
            Element e = poly_to_element(poly, ctx);
            for (const auto& [bd, v] : e.parts())
                if (bd != sym.bd + step)
                    throw Error(ErrorKind::GradingViolation,
                                ctx + " has a term of bidegree " + bd.to_string() + ", expected " + (sym.bd + step).to_string(),
                                basis_label(bd, v.leading()));
            for (const auto& [bd, v] : e.parts()) {
                for (const auto& [i, c] : v.entries()) {
                    const Monomial& m = basis_[bd][i];
                    bool linear_next = m.factors.size() == 1 && m.factors[0].second == 1 &&
                                       pres_.symbols[m.factors[0].first].bd.total() == sym.bd.total() + 1;
                    bool lower = m.factors.back().first < g;
                    if (!linear_next && !lower)
                        throw Error(ErrorKind::NonNilpotentOrder,
                                    ctx + " uses generators not declared before " + sym.name, monomial_label(m));
                }
            }
            dst[g] = std::move(e);
        }
    };
    assign(pres_.del, gen_del_, kDel, "del");
    assign(pres_.delbar, gen_delbar_, kDelbar, "delbar");

    std::vector<std::pair<Bidegree, bool>> jobs;
    for (int t = -1; t <= D_ - 1; ++t)
        for (int p = -1; p <= t + 1; ++p)
            for (bool bar : {false, true})
                jobs.push_back({{p, t - p}, bar});
    std::vector<SparseMatrix> mats(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t k) {
        auto [src, bar] = jobs[k];
        Bidegree tgt = src + (bar ? kDelbar : kDel);
        SparseMatrix m(dim(tgt), dim(src));
        if (dim(src) > 0 && dim(tgt) > 0) {
            std::vector<SparseVec> cols;
            for (const auto& mono : basis_.at(src))
                cols.push_back(diff_monomial(mono, bar).at(tgt));
            m = SparseMatrix::from_columns(dim(tgt), cols);
        }
        mats[k] = std::move(m);
    });
    for (std::size_t k = 0; k < jobs.size(); ++k)
        (jobs[k].second ? delbar_ : del_)[jobs[k].first] = std::move(mats[k]);

    // ∂, ∂̄ and ∂∂̄+∂̄∂ are derivations, so square-zero on generators is square-zero everywhere.
    for (uint32_t g = 0; g < G; ++g) {
        const auto& sym = pres_.symbols[g];
        if (sym.bd.total() + 2 > D_)
            continue;
        Element x = generator(g);
        auto check = [&](const Element& r, const std::string& what) {
            if (!r.is_zero())
                throw Error(ErrorKind::NonSquareZero, what + " is " + to_string(*this, r), sym.name);
        };
        check(formality::del(*this, formality::del(*this, x)), "del del " + sym.name);
        check(formality::delbar(*this, formality::delbar(*this, x)), "delbar delbar " + sym.name);
        check(formality::del(*this, formality::delbar(*this, x)) + formality::delbar(*this, formality::del(*this, x)),
              "(del delbar + delbar del) " + sym.name);
        if (minimal_ && !linear_part(ddbar(*this, x)).empty()) {
            minimal_ = false;
            non_minimal_witness_ = sym.name;
        }
    }
}

std::size_t FreeCbba::dim(Bidegree bd) const
{
    auto it = basis_.find(bd);
    return it == basis_.end() ? 0 : it->second.size();
}

const SparseMatrix& FreeCbba::diff(const std::map<Bidegree, SparseMatrix>& m, Bidegree src, const char* which) const
{
    auto it = m.find(src);
    if (it != m.end())
        return it->second;
    if (src.total() >= D_)
        throw Error(ErrorKind::InsufficientTruncation,
                    std::string(which) + " out of " + src.to_string() + " needs total degree " +
                        std::to_string(src.total() + 1) + " > truncation " + std::to_string(D_));
    static const SparseMatrix empty;
    return empty;
}

const std::vector<Monomial>& FreeCbba::monomial_basis(Bidegree bd) const
{
    if (bd.total() > D_)
        throw Error(ErrorKind::TruncationOverflow, "bidegree " + bd.to_string() + " beyond truncation");
    static const std::vector<Monomial> none;
    auto it = basis_.find(bd);
    return it == basis_.end() ? none : it->second;
}

std::optional<uint32_t> FreeCbba::monomial_index(Bidegree bd, const Monomial& m) const
{
    auto it = index_.find(bd);
    if (it == index_.end())
        return std::nullopt;
    auto jt = it->second.find(m);
    if (jt == it->second.end())
        return std::nullopt;
    return jt->second;
}

Bidegree FreeCbba::monomial_bidegree(const Monomial& m) const
{
    Bidegree bd{0, 0};
    for (const auto& [g, e] : m.factors) {
        bd.p += static_cast<int>(e) * pres_.symbols[g].bd.p;
        bd.q += static_cast<int>(e) * pres_.symbols[g].bd.q;
    }
    return bd;
}

std::optional<std::pair<int, Monomial>> FreeCbba::monomial_product(const Monomial& a, const Monomial& b) const
{
    // Sign: each odd factor of b moves left past the odd factors of a with larger index.
    std::vector<uint32_t> odd_a;
    for (const auto& [g, e] : a.factors)
        if (odd(g))
            odd_a.push_back(g);
    int swaps = 0;
    std::size_t k = 0;
    for (const auto& [h, e] : b.factors) {
        if (!odd(h))
            continue;
        while (k < odd_a.size() && odd_a[k] < h)
            ++k;
        if (k < odd_a.size() && odd_a[k] == h)
            return std::nullopt;
        swaps += static_cast<int>(odd_a.size() - k);
    }
    Monomial out;
    out.factors.reserve(a.factors.size() + b.factors.size());
    std::size_t i = 0, j = 0;
    while (i < a.factors.size() || j < b.factors.size()) {
        if (j == b.factors.size() || (i < a.factors.size() && a.factors[i].first < b.factors[j].first))
            out.factors.push_back(a.factors[i++]);
        else if (i == a.factors.size() || b.factors[j].first < a.factors[i].first)
            out.factors.push_back(b.factors[j++]);
        else {
            out.factors.emplace_back(a.factors[i].first, a.factors[i].second + b.factors[j].second);
            ++i;
            ++j;
        }
    }
    return std::make_pair(swaps % 2 ? -1 : 1, std::move(out));
}

uint32_t FreeCbba::generator_index(uint32_t g) const
{
    Monomial m;
    m.factors.emplace_back(g, 1);
    return *monomial_index(pres_.symbols[g].bd, m);
}

Element FreeCbba::generator(uint32_t g) const { return Element::basis(pres_.symbols[g].bd, generator_index(g)); }

std::vector<uint32_t> FreeCbba::generators_of(Bidegree bd) const
{
    std::vector<uint32_t> out;
    for (uint32_t g = 0; g < pres_.symbols.size(); ++g)
        if (pres_.symbols[g].bd == bd)
            out.push_back(g);
    return out;
}

std::vector<uint32_t> FreeCbba::generators_of_total(int t) const
{
    std::vector<uint32_t> out;
    for (uint32_t g = 0; g < pres_.symbols.size(); ++g)
        if (pres_.symbols[g].bd.total() == t)
            out.push_back(g);
    return out;
}

SparseVec FreeCbba::multiply(Bidegree a, const SparseVec& u, Bidegree b, const SparseVec& v) const
{
    Bidegree c = a + b;
    if (u.empty() || v.empty())
        return {};
    if (c.total() > D_)
        throw Error(ErrorKind::TruncationOverflow,
                    "product of degree " + std::to_string(c.total()) + " exceeds truncation " + std::to_string(D_));
    const auto& ba = basis_.at(a);
    const auto& bb = basis_.at(b);
    std::map<uint32_t, Scalar> acc;
    for (const auto& [i, x] : u.entries()) {
        for (const auto& [j, y] : v.entries()) {
            auto prod = monomial_product(ba[i], bb[j]);
            if (!prod)
                continue;
            uint32_t k = *monomial_index(c, prod->second);
            Scalar t = x * y;
            if (prod->first < 0)
                t = -t;
            acc[k] += t;
        }
    }
    SparseVec out;
    for (auto& [k, s] : acc)
        if (!s.is_zero())
            out.push_back(k, std::move(s));
    return out;
}

std::string FreeCbba::monomial_label(const Monomial& m) const
{
    if (m.empty())
        return "1";
    std::string out;
    for (const auto& [g, e] : m.factors)
        for (uint32_t k = 0; k < e; ++k) {
            if (!out.empty())
                out += '*';
            out += pres_.symbols[g].name;
        }
    return out;
}

std::string FreeCbba::basis_label(Bidegree bd, uint32_t i) const { return monomial_label(basis_.at(bd).at(i)); }

Element FreeCbba::poly_to_element(const Poly& p, const std::string& context) const
{
    Element out;
    for (const auto& term : p) {
        Monomial m;
        int sign = 1;
        for (uint32_t f : term.factors) {
            if (f >= pres_.symbols.size())
                throw Error(ErrorKind::UnknownReference, context + " references an unknown generator");
            Monomial single;
            single.factors.emplace_back(f, 1);
            auto prod = monomial_product(m, single);
            if (!prod)
                throw Error(ErrorKind::GradingViolation,
                            context + " contains the square of the odd generator " + pres_.symbols[f].name,
                            pres_.symbols[f].name);
            sign *= prod->first;
            m = std::move(prod->second);
        }
        Bidegree bd = monomial_bidegree(m);
        if (bd.total() > D_)
            throw Error(ErrorKind::TruncationOverflow, context + " has a term above the truncation", monomial_label(m));
        out.add(bd, SparseVec::unit(*monomial_index(bd, m)), sign < 0 ? -term.coef : term.coef);
    }
    return out;
}

Element FreeCbba::diff_monomial(const Monomial& m, bool bar) const
{
    Bidegree tgt = monomial_bidegree(m) + (bar ? kDelbar : kDel);
    std::map<uint32_t, Scalar> acc;
    int prefix_deg = 0;
    for (std::size_t k = 0; k < m.factors.size(); ++k) {
        auto [g, e] = m.factors[k];
        const Element& dx = bar ? gen_delbar_[g] : gen_del_[g];
        if (!dx.is_zero()) {
            Monomial prefix, rest;
            prefix.factors.assign(m.factors.begin(), m.factors.begin() + static_cast<long>(k));
            if (e > 1)
                rest.factors.emplace_back(g, e - 1);
            rest.factors.insert(rest.factors.end(), m.factors.begin() + static_cast<long>(k) + 1, m.factors.end());
            Scalar base(static_cast<long>(e));
            if (prefix_deg % 2)
                base = -base;
            for (const auto& [bd, v] : dx.parts()) {
                for (const auto& [i, c] : v.entries()) {
                    auto left = monomial_product(prefix, basis_.at(bd)[i]);
                    if (!left)
                        continue;
                    auto full = monomial_product(left->second, rest);
                    if (!full)
                        continue;
                    Scalar t = base * c;
                    if (left->first * full->first < 0)
                        t = -t;
                    acc[*monomial_index(tgt, full->second)] += t;
                }
            }
        }
        prefix_deg += static_cast<int>(e) * pres_.symbols[g].bd.total();
    }
    SparseVec out;
    for (auto& [k, s] : acc)
        if (!s.is_zero())
            out.push_back(k, std::move(s));
    return Element(tgt, std::move(out));
}

SparseVec FreeCbba::linear_part(const Element& e) const
{
    std::map<uint32_t, Scalar> acc;
    for (const auto& [bd, v] : e.parts()) {
        auto it = basis_.find(bd);
        if (it == basis_.end())
            continue;
        for (const auto& [i, c] : v.entries()) {
            const Monomial& m = it->second[i];
            if (m.factors.size() == 1 && m.factors[0].second == 1)
                acc[m.factors[0].first] = c;
        }
    }
    SparseVec out;
    for (auto& [g, c] : acc)
        out.push_back(g, std::move(c));
    return out;
}

}  // namespace formality
