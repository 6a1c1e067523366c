#include "formality_detail.hpp"

#include "formality/parallel.hpp"

namespace formality {

using namespace detail;

namespace {

// Independent spanning elements of C(ΛV^{<=s}) at one bidegree with their ψ
// representatives (closed elements of ΛV, meaningful modulo Im ∂∂̄).
struct Slice {
    explicit Slice(std::size_t n) : echelon(n, true) {}
    Echelon echelon;
    std::vector<SparseVec> elems;
    std::vector<SparseVec> psis;

    SparseVec psi_of(const SparseVec& comb) const
    {
        SparseVec out;
        for (const auto& [i, c] : comb.entries())
            out.axpy(c, psis[i]);
        return out;
    }
};

[[noreturn]] void violation(const Bicomplex& a, const std::string& what, Bidegree bd, const SparseVec& w)
{
    throw Error(ErrorKind::MorphismViolation, what + " at " + bd.to_string(), to_string(a, Element(bd, w)));
}

}  // namespace

PsiMorphism build_psi(const FreeCbba& a, const SplittingCertificate& cert, int s)
{
    auto rep = split_verify(a, cert, s);
    if (!rep.passed)
        throw Error(ErrorKind::MorphismViolation, "certificate fails verification: " + rep.failures.front(),
                    rep.witness ? to_string(a, *rep.witness) : "");

    PsiMorphism psi;
    psi.s = s;
    int top = a.top_degree() - 1;

    // Building elements with their ψ images.
    std::vector<std::pair<Element, Element>> building;
    for (const auto& [bd, gens] : cert.c_basis)
        if (bd.total() <= s)
            for (const auto& g : gens)
                building.emplace_back(g.value(), g.value());
    std::vector<Element> n_vals;
    for (const auto& [bd, gens] : cert.n_basis)
        if (bd.total() <= s)
            for (const auto& g : gens)
                n_vals.push_back(g.value());
    for (auto& e : differential_closure(a, n_vals))
        building.emplace_back(std::move(e), Element());

    std::map<Bidegree, Slice> slices;
    std::map<Bidegree, Subspace> ddbar_im;
    auto image = [&](Bidegree bd) -> const Subspace& {
        auto it = ddbar_im.find(bd);
        if (it == ddbar_im.end())
            it = ddbar_im.emplace(bd, im_ddbar(a, bd)).first;
        return it->second;
    };

    for (int t = 0; t <= top; ++t)
        for (Bidegree bd : a.slices(t)) {
            Slice sl(a.dim(bd));
            auto add = [&](SparseVec w, SparseVec pw) {
                if (w.empty())
                    return;
                ++psi.spanning_elements;
                if (auto comb = sl.echelon.express(w)) {
                    ++psi.relations_checked;
                    SparseVec diff = pw - sl.psi_of(*comb);
                    if (!image(bd).contains(diff))
                        violation(a, "ψ is not well defined on a relation", bd, w);
                    return;
                }
                sl.echelon.insert(w);
                sl.elems.push_back(std::move(w));
                sl.psis.push_back(std::move(pw));
            };
            if (bd == Bidegree{0, 0})
                add(a.unit().at(bd), a.unit().at(bd));
            for (const auto& [e, pe] : building) {
                Bidegree eb = *e.bidegree();
                Bidegree rest = bd - eb;
                if (!rest.valid())
                    continue;
                auto it = slices.find(rest);
                if (it == slices.end())
                    continue;
                for (std::size_t i = 0; i < it->second.elems.size(); ++i)
                    add(a.multiply(eb, e.at(eb), rest, it->second.elems[i]),
                        pe.is_zero() ? SparseVec() : a.multiply(eb, pe.at(eb), rest, it->second.psis[i]));
            }
            if (!sl.elems.empty())
                slices.emplace(bd, std::move(sl));
        }

    auto expressed = [&](Bidegree bd, const SparseVec& w) -> std::optional<SparseVec> {
        if (w.empty())
            return SparseVec();
        auto it = slices.find(bd);
        if (it == slices.end())
            return std::nullopt;
        return it->second.echelon.express(w);
    };

    // ψ∘∂ = ψ∘∂̄ = 0 modulo Im ∂∂̄, and agreement with the inclusion on classes.
    std::vector<Bidegree> bds;
    for (const auto& [bd, _] : slices)
        bds.push_back(bd);
    for (const auto& [bd, _] : slices)
        image(bd);
    for (int t = 0; t <= top; ++t)
        for (Bidegree bd : a.slices(t))
            image(bd);
    std::vector<std::size_t> diff_checks(bds.size());
    std::vector<std::optional<PsiMorphism::InducedRow>> rows(bds.size());
    parallel_for(bds.size(), [&](std::size_t k) {
        Bidegree bd = bds[k];
        const Slice& sl = slices.at(bd);
        int t = bd.total();
        if (t + 1 <= top)
            for (const auto& w : sl.elems)
                for (Bidegree step : {Bidegree{1, 0}, Bidegree{0, 1}}) {
                    Bidegree tgt = bd + step;
                    const SparseMatrix& m = step.p ? a.del(bd) : a.delbar(bd);
                    SparseVec dw = m.apply(w);
                    if (dw.empty())
                        continue;
                    auto comb = expressed(tgt, dw);
                    if (!comb)
                        violation(a, "the sub-cbba is not closed under the differentials", bd, w);
                    ++diff_checks[k];
                    if (!ddbar_im.at(tgt).contains(slices.at(tgt).psi_of(*comb)))
                        violation(a, step.p ? "ψ∘∂ is not zero" : "ψ∘∂̄ is not zero", bd, w);
                }
        if (t + 1 > top)
            return;

        // Closed and ∂∂̄-closed elements of the sub-cbba, as combinations.
        TotalSpace next(a, t + 1);
        std::vector<SparseVec> dcols;
        for (const auto& w : sl.elems) {
            Element e(bd, w);
            dcols.push_back(next.flatten(del(a, e)) + next.flatten(delbar(a, e)));
        }
        auto closed = kernel_basis(SparseMatrix::from_columns(next.dim(), dcols));
        PsiMorphism::InducedRow row;
        row.bd = bd;
        std::vector<SparseVec> closed_vecs;
        for (const auto& c : closed) {
            SparseVec z, pz;
            for (const auto& [i, x] : c.entries()) {
                z.axpy(x, sl.elems[i]);
                pz.axpy(x, sl.psis[i]);
            }
            if (!ddbar_im.at(bd).contains(pz - z))
                violation(a, "ψ and the inclusion induce different maps on H_BC", bd, z);
            closed_vecs.push_back(std::move(z));
        }
        if (t > s + 1)
            return;
        // H_BC of the sub-cbba: closed modulo ∂∂̄ of the sub-cbba.
        Subspace closed_sub = Subspace::span(a.dim(bd), closed_vecs);
        std::vector<SparseVec> dd_sub;
        if (auto it = slices.find(bd - kDdbar); (bd - kDdbar).valid() && it != slices.end())
            for (const auto& w : it->second.elems)
                dd_sub.push_back(a.ddbar_into(bd).apply(w));
        Subspace b_sub = Subspace::span(a.dim(bd), dd_sub);
        auto bc = cohomology(a, CohomologyKind::BottChern, bd);
        row.bc_source = closed_sub.dim() - b_sub.dim();
        row.bc_rank = sum(closed_sub, ddbar_im.at(bd)).dim() - ddbar_im.at(bd).dim();
        row.bc_target = bc.dim();

        if (t <= cohomology_limit(a, CohomologyKind::Aeppli)) {
            row.a_computed = true;
            std::vector<SparseVec> ddc;
            for (const auto& w : sl.elems)
                ddc.push_back(a.ddbar_from(bd).apply(w));
            auto ker = kernel_basis(SparseMatrix::from_columns(a.dim(bd + kDdbar), ddc));
            Subspace e_all = im_del_plus_delbar(a, bd);
            std::vector<SparseVec> dd_closed;
            for (const auto& c : ker) {
                SparseVec z, pz;
                for (const auto& [i, x] : c.entries()) {
                    z.axpy(x, sl.elems[i]);
                    pz.axpy(x, sl.psis[i]);
                }
                if (!e_all.contains(pz - z))
                    violation(a, "ψ and the inclusion induce different maps on H_A", bd, z);
                dd_closed.push_back(std::move(z));
            }
            std::vector<SparseVec> exact_sub;
            for (Bidegree step : {Bidegree{1, 0}, Bidegree{0, 1}}) {
                Bidegree src = bd - step;
                auto it = slices.find(src);
                if (!src.valid() || it == slices.end())
                    continue;
                const SparseMatrix& m = step.p ? a.del(src) : a.delbar(src);
                for (const auto& w : it->second.elems)
                    exact_sub.push_back(m.apply(w));
            }
            Subspace z_sub = Subspace::span(a.dim(bd), dd_closed);
            Subspace e_sub = Subspace::span(a.dim(bd), exact_sub);
            row.a_source = z_sub.dim() - e_sub.dim();
            row.a_rank = sum(z_sub, e_all).dim() - e_all.dim();
            row.a_target = cohomology(a, CohomologyKind::Aeppli, bd).dim();
        }
        rows[k] = row;
    });
    for (std::size_t k = 0; k < bds.size(); ++k) {
        psi.differential_checks += diff_checks[k];
        if (!rows[k])
            continue;
        const auto& r = *rows[k];
        int t = r.bd.total();
        bool bc_ok = t <= s ? r.bc_source == r.bc_rank && r.bc_rank == r.bc_target : r.bc_rank == r.bc_source;
        bool a_ok = !r.a_computed ||
                    (t <= s ? r.a_source == r.a_rank && r.a_rank == r.a_target : r.a_rank == r.a_source);
        if (!bc_ok || !a_ok)
            throw Error(ErrorKind::MorphismViolation,
                        std::string("induced map on ") + (bc_ok ? "H_A" : "H_BC") + " is not " +
                            (t <= s ? "bijective" : "injective") + " at " + r.bd.to_string());
        psi.induced.push_back(r);
    }

    // ψ of the original generators, reduced modulo Im ∂∂̄.
    for (uint32_t g = 0; g < a.num_generators(); ++g) {
        Bidegree bd = a.generator_symbol(g).bd;
        if (bd.total() > s)
            continue;
        SparseVec x = a.generator(g).at(bd);
        auto comb = expressed(bd, x);
        if (!comb)
            violation(a, "generator is not in the sub-cbba", bd, x);
        psi.generator_image[g] = Element(bd, image(bd).reduce(slices.at(bd).psi_of(*comb)));
    }
    return psi;
}

}  // namespace formality
