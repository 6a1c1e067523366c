#include "formality/lemma.hpp"
#include "formality/model.hpp"
#include "formality/subalgebra.hpp"

#include <set>

namespace formality {

namespace {

[[noreturn]] void contract(const std::string& what, const std::string& witness = "")
{
    throw Error(ErrorKind::RestrictionContractViolated, what, witness);
}

// Linear extension of the restriction from basis symbols to elements of B.
Element restrict(const FiniteCbba& b, const std::vector<Element>& rho, const Element& e)
{
    Element out;
    for (const auto& [bd, v] : e.parts())
        for (const auto& [i, c] : v.entries())
            out.axpy(c, rho[b.symbol_of(bd, i)]);
    return out;
}

void check_ring_map(const FiniteCbba& b, const FiniteCbba& a, const std::vector<Element>& rho)
{
    const auto& syms = b.presentation().symbols;
    if (rho.size() != syms.size())
        contract("the restriction needs one image per basis element of B");
    for (uint32_t i = 0; i < syms.size(); ++i) {
        auto bd = rho[i].bidegree();
        if (bd && *bd != syms[i].bd)
            contract("the restriction of " + syms[i].name + " has bidegree " + bd->to_string(), to_string(a, rho[i]));
        Element e = b.symbol(i);
        if (restrict(b, rho, del(b, e)) != del(a, rho[i]) || restrict(b, rho, delbar(b, e)) != delbar(a, rho[i]))
            contract("the restriction does not commute with the differentials at " + syms[i].name);
        for (uint32_t j = i; j < syms.size(); ++j)
            if (restrict(b, rho, multiply(b, e, b.symbol(j))) != multiply(a, rho[i], rho[j]))
                contract("the restriction is not multiplicative on " + syms[i].name + "·" + syms[j].name);
    }
    if (restrict(b, rho, b.unit()) != a.unit())
        contract("the restriction does not preserve the unit");
}

// H_BC and H_A of ρ: isomorphisms in totals <= n-1, injective in total n.
void check_cohomology(const FiniteCbba& b, const FiniteCbba& a, const std::vector<Element>& rho, int n)
{
    for (int t = 0; t <= n; ++t)
        for (int p = 0; p <= t; ++p) {
            Bidegree bd{p, t - p};
            for (auto kind : {CohomologyKind::BottChern, CohomologyKind::Aeppli}) {
                std::optional<CohomologySpace> hb, ha;
                if (b.dim(bd) != 0)
                    hb = cohomology(b, kind, bd);
                if (a.dim(bd) != 0)
                    ha = cohomology(a, kind, bd);
                std::size_t db = hb ? hb->dim() : 0;
                std::size_t da = ha ? ha->dim() : 0;
                std::vector<SparseVec> cols;
                for (std::size_t i = 0; i < db && ha; ++i) {
                    auto c = ha->coordinates(a, restrict(b, rho, hb->representatives[i]));
                    if (!c)
                        contract("the restriction of a class is not a class at " + bd.to_string());
                    SparseVec col;
                    for (std::size_t j = 0; j < c->size(); ++j)
                        if (!(*c)[j].is_zero())
                            col.push_back(static_cast<uint32_t>(j), (*c)[j]);
                    cols.push_back(std::move(col));
                }
                std::size_t rank = Subspace::span(da, cols).dim();
                const char* name = kind == CohomologyKind::BottChern ? "H_BC" : "H_A";
                if (rank < db)
                    contract(std::string(name) + " of the restriction is not injective at " + bd.to_string());
                if (t < n && rank < da)
                    contract(std::string(name) + " of the restriction is not surjective at " + bd.to_string());
            }
        }
}

// Generators of total <= n together with everything their differentials
// mention, renumbered in the original order.
Presentation low_part(const Presentation& src, int n, std::vector<uint32_t>& kept)
{
    std::set<uint32_t> keep;
    std::vector<uint32_t> todo;
    for (uint32_t g = 0; g < src.symbols.size(); ++g)
        if (src.symbols[g].bd.total() <= n)
            todo.push_back(g);
    while (!todo.empty()) {
        uint32_t g = todo.back();
        todo.pop_back();
        if (!keep.insert(g).second)
            continue;
        for (const auto* m : {&src.del, &src.delbar})
            if (auto it = m->find(g); it != m->end())
                for (const auto& t : it->second)
                    todo.insert(todo.end(), t.factors.begin(), t.factors.end());
    }
    kept.assign(keep.begin(), keep.end());
    std::map<uint32_t, uint32_t> index;
    Presentation out;
    out.name = src.name;
    out.kind = AlgebraKind::Free;
    for (uint32_t g : kept)
        index[g] = out.add_symbol(src.symbols[g].name, src.symbols[g].bd);
    auto remap = [&](const Poly& p) {
        Poly q = p;
        for (auto& t : q)
            for (auto& f : t.factors)
                f = index.at(f);
        return q;
    };
    for (const auto* m : {&src.del, &src.delbar})
        for (const auto& [g, p] : *m)
            if (index.count(g))
                (m == &src.del ? out.del : out.delbar)[index.at(g)] = remap(p);
    return out;
}

// Degree of the generator named in a completion report.
int degree_of(const FreeCbba& a, const std::string& name)
{
    return a.generator_symbol(*a.presentation().index_of(name)).bd.total();
}

// Generator data and ideal dimensions determining I_{n-1}.
struct Snapshot {
    std::vector<std::string> generators;
    std::map<Bidegree, std::size_t> ideal_dims;  // nonzero slices only
    std::size_t slices = 0;
    bool same_ideal(const Snapshot& o) const { return generators == o.generators && ideal_dims == o.ideal_dims; }
};

Snapshot snapshot(const FreeCbba& a, const SplittingCertificate& cert, int scope)
{
    Snapshot s;
    for (uint32_t g = 0; g < a.num_generators(); ++g) {
        const auto& sym = a.generator_symbol(g);
        if (sym.bd.total() <= cert.s)
            s.generators.push_back(sym.name + " " + sym.bd.to_string() + " " + to_string(a, a.generator_del(g)) +
                                   " " + to_string(a, a.generator_delbar(g)));
    }
    auto c = generated_subalgebra(a, split_building(a, cert, cert.s), scope);
    auto n_gens = cert.n_elements();
    for (int t = 0; t <= scope; ++t)
        for (Bidegree bd : a.slices(t))
            if (std::size_t dim = split_ideal(a, n_gens, c, bd).dim(); ++s.slices, dim != 0)
                s.ideal_dims[bd] = dim;
    return s;
}

std::shared_ptr<const FreeCbba> at_truncation(Presentation p, int d)
{
    p.truncation = d;
    return std::dynamic_pointer_cast<const FreeCbba>(validate(p));
}

}  // namespace

LefschetzResult lefschetz_extend(const RestrictionInput& in, int D)
{
    int n = in.n;
    if (n < 1)
        throw Error(ErrorKind::PreconditionFailed, "the Lefschetz extension needs n >= 1");
    if (D < 2 * n + 2)
        throw Error(ErrorKind::TruncationTooSmall, "the Lefschetz extension needs truncation >= 2n+2");
    const auto& bm = in.b_model.map;
    if (!bm.model || !bm.target || !in.a_ring)
        throw Error(ErrorKind::PreconditionFailed, "the restriction input is incomplete");
    const FiniteCbba& b = *bm.target;
    const FiniteCbba& a = *in.a_ring;
    check_ring_map(b, a, in.restriction);
    check_cohomology(b, a, in.restriction, n);

    const FreeCbba& mb = *bm.model;
    SplittingCertificate b_cert;
    if (in.b_certificate) {
        b_cert = *in.b_certificate;
        auto rep = split_verify(mb, b_cert, n - 1);
        if (!rep.passed)
            contract("the certificate of B fails verification: " + rep.failures.front());
    } else {
        b_cert = split_search(mb, n - 1);
    }

    // M' = Λ(V_B^{<=n}) mapped into A through the restriction.
    std::vector<uint32_t> kept;
    Presentation partial = low_part(mb.presentation(), n, kept);
    partial.name = a.name() + "-extension";
    partial.sd_target = n;
    std::vector<Element> images;
    for (uint32_t g : kept)
        images.push_back(restrict(b, in.restriction, bm.images[g]));

    // Stage 1 through degree n+1: cokernel H in degree n, triples on K in n+1.
    LefschetzResult out;
    CompletedModel stage;
    try {
        stage = complete_model(partial, images, in.a_ring, n + 1);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::PreconditionFailed)
            throw Error(ErrorKind::InternalContradiction, std::string("K is not decomposable: ") + e.what(), e.witness());
        throw;
    }
    const FreeCbba& s1 = *stage.map.model;
    for (const auto& g : stage.report.closed_added) {
        if (degree_of(s1, g) < n)
            contract("the restricted model misses a class of A below degree n", g);
        if (degree_of(s1, g) == n)
            out.h_generators.push_back(g);
    }
    for (const auto& r : stage.report.triples_added) {
        if (degree_of(s1, r) < n - 1)
            contract("the restricted model has a Bott-Chern kernel below degree n+1", r);
        if (degree_of(s1, r) == n - 1)
            out.k_generators.push_back(r);
    }
    for (const auto& g : stage.report.gadgets_added)
        if (degree_of(s1, g) < n)
            contract("the restricted model has an Aeppli kernel below degree n+1", g);

    auto hat = at_truncation(s1.presentation(), D);
    int scope = ddbar_scope(*hat);
    auto frozen = low_degree_certificate(*hat, n - 1);
    Snapshot before = snapshot(*hat, frozen, scope);

    // N_B ⊕ R in degree n-1.
    auto n_names = [](const FreeCbba& m, const SplittingCertificate& c) {
        std::set<std::string> names;
        for (const auto& e : c.n_elements())
            names.insert(to_string(m, e));
        return names;
    };
    auto hat_n = n_names(*hat, frozen);
    for (const auto& name : n_names(mb, b_cert))
        if (!hat_n.count(name))
            throw Error(ErrorKind::InternalContradiction, "N of B is not part of N of the extension", name);
    for (const auto& r : out.k_generators)
        if (!hat_n.count(r))
            throw Error(ErrorKind::InternalContradiction, "a K triple is missing from N", r);

    Presentation next = s1.presentation();
    next.truncation.reset();
    out.completed = complete_model(next, stage.map.images, in.a_ring, D);
    const FreeCbba& m = *out.completed.map.model;
    out.completed.report.closed_added.insert(out.completed.report.closed_added.begin(),
                                              stage.report.closed_added.begin(), stage.report.closed_added.end());
    out.completed.report.triples_added.insert(out.completed.report.triples_added.begin(),
                                               stage.report.triples_added.begin(), stage.report.triples_added.end());
    out.completed.report.gadgets_added.insert(out.completed.report.gadgets_added.begin(),
                                               stage.report.gadgets_added.begin(), stage.report.gadgets_added.end());

    auto after_cert = low_degree_certificate(m, n - 1);
    Snapshot after = snapshot(m, after_cert, scope);
    if (!before.same_ideal(after))
        throw Error(ErrorKind::InternalContradiction, "completion changed the frozen ideal I_{n-1}");
    out.snapshot_checks = before.slices + after.slices;

    out.certificate = promote(m, n);
    return out;
}

}  // namespace formality
