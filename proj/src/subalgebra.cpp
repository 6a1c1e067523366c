#include "formality/subalgebra.hpp"

namespace formality {

Subspace SliceFamily::at(const Bicomplex& a, Bidegree bd) const
{
    if (bd.total() > max_total_)
        throw Error(ErrorKind::InsufficientTruncation,
                    "sub-cbba computed only up to total degree " + std::to_string(max_total_) + ", asked for " + bd.to_string());
    auto it = slices_.find(bd);
    if (it != slices_.end())
        return it->second;
    return Subspace(a.dim(bd));
}

std::vector<Element> differential_closure(const Bicomplex& a, const std::vector<Element>& gens)
{
    std::vector<Element> out;
    for (const auto& g : gens) {
        auto bd = g.bidegree();
        if (!bd)
            continue;
        out.push_back(g);
        int t = bd->total();
        if (t <= a.diff_limit()) {
            Element dg = del(a, g), bg = delbar(a, g);
            if (!dg.is_zero())
                out.push_back(dg);
            if (!bg.is_zero())
                out.push_back(bg);
            if (t + 1 <= a.diff_limit()) {
                Element ddg = del(a, bg);
                if (!ddg.is_zero())
                    out.push_back(ddg);
            }
        }
    }
    return out;
}

SliceFamily generated_subalgebra(const Bicomplex& a, const std::vector<Element>& building, int max_total)
{
    SliceFamily fam(max_total);
    fam.set({0, 0}, Subspace::span(a.dim({0, 0}), std::vector<SparseVec>{a.unit().at({0, 0})}));
    for (int t = 1; t <= max_total; ++t) {
        for (int p = 0; p <= t; ++p) {
            Bidegree bd{p, t - p};
            std::size_t n = a.dim(bd);
            if (n == 0)
                continue;
            std::vector<SparseVec> vecs;
            for (const auto& e : building) {
                Bidegree eb = *e.bidegree();
                Bidegree rest = bd - eb;
                if (!rest.valid())
                    continue;
                const auto& sub = fam.slices();
                auto it = sub.find(rest);
                if (it == sub.end())
                    continue;
                for (const auto& v : it->second.basis()) {
                    SparseVec w = a.multiply(eb, e.at(eb), rest, v);
                    if (!w.empty())
                        vecs.push_back(std::move(w));
                }
            }
            Subspace s = Subspace::span(n, vecs);
            if (!s.is_zero())
                fam.set(bd, std::move(s));
        }
    }
    return fam;
}

SliceFamily generated_sub_cbba(const FreeCbba& a, int s, std::optional<int> max_total)
{
    int top = max_total.value_or(a.top_degree());
    std::vector<Element> gens;
    for (uint32_t g = 0; g < a.num_generators(); ++g)
        if (a.generator_symbol(g).bd.total() <= s)
            gens.push_back(a.generator(g));
    std::vector<Element> building;
    for (auto& e : differential_closure(a, gens))
        if (e.bidegree()->total() <= top)
            building.push_back(std::move(e));
    return generated_subalgebra(a, building, top);
}

Subspace ideal_span(const Bicomplex& a, const std::vector<Element>& gens, Bidegree bd, const SliceFamily* ambient,
                    bool closure)
{
    std::size_t n = a.dim(bd);
    std::vector<Element> set = closure ? differential_closure(a, gens) : gens;
    std::vector<SparseVec> vecs;
    for (const auto& g : set) {
        if (g.is_zero())
            continue;
        auto gb = g.bidegree();
        if (!gb)
            throw std::invalid_argument("ideal generators must be homogeneous");
        Bidegree rest = bd - *gb;
        if (!rest.valid() || a.dim(rest) == 0)
            continue;
        if (ambient) {
            Subspace slice = ambient->at(a, rest);
            for (const auto& v : slice.basis()) {
                SparseVec w = a.multiply(*gb, g.at(*gb), rest, v);
                if (!w.empty())
                    vecs.push_back(std::move(w));
            }
        } else {
            for (uint32_t i = 0; i < a.dim(rest); ++i) {
                SparseVec w = a.multiply(*gb, g.at(*gb), rest, SparseVec::unit(i));
                if (!w.empty())
                    vecs.push_back(std::move(w));
            }
        }
    }
    return Subspace::span(n, vecs);
}

}  // namespace formality
