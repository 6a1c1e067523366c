#include "formality_detail.hpp"

#include "formality/parallel.hpp"

#include <limits>
#include <set>

namespace formality {

namespace detail {

std::vector<Element> family_elements(const Bicomplex& a, const SliceFamily& fam, int t)
{
    std::vector<Element> out;
    for (Bidegree bd : a.slices(t)) {
        Subspace s = fam.at(a, bd);
        for (const auto& v : s.basis())
            out.emplace_back(bd, v);
    }
    return out;
}

std::optional<SparseVec> solve_combination(const Bicomplex& a, int t, const std::vector<Element>& cols,
                                           const Element& target)
{
    TotalSpace ts(a, t);
    if (cols.empty())
        return target.is_zero() ? std::optional<SparseVec>(SparseVec()) : std::nullopt;
    std::vector<SparseVec> flat;
    flat.reserve(cols.size());
    for (const auto& c : cols)
        flat.push_back(ts.flatten(c));
    return solve(SparseMatrix::from_columns(ts.dim(), flat), ts.flatten(target));
}

Element combine(const std::vector<Element>& cols, const SparseVec& coeffs)
{
    Element out;
    for (const auto& [j, c] : coeffs.entries())
        out.axpy(c, cols[j]);
    return out;
}

std::vector<Element> as_elements(Bidegree bd, const std::vector<SparseVec>& vs)
{
    std::vector<Element> out;
    for (const auto& v : vs)
        out.emplace_back(bd, v);
    return out;
}

std::optional<Element> ddbar_primitive(const Bicomplex& a, const Element& target, Bidegree bd)
{
    if (target.is_zero())
        return Element();
    Bidegree src = bd - kDdbar;
    if (!src.valid() || a.dim(src) == 0)
        return std::nullopt;
    auto x = solve(a.ddbar_into(bd), target.at(bd));
    if (!x)
        return std::nullopt;
    return Element(src, *x);
}

std::optional<std::pair<Element, Element>> del_delbar_split(const Bicomplex& a, const Element& target, Bidegree bd)
{
    if (target.is_zero())
        return std::pair<Element, Element>{};
    Bidegree s1 = bd - Bidegree{1, 0}, s2 = bd - Bidegree{0, 1};
    std::size_t n1 = s1.valid() ? a.dim(s1) : 0, n2 = s2.valid() ? a.dim(s2) : 0;
    std::vector<SparseVec> cols;
    if (n1)
        for (auto& c : a.del(s1).columns())
            cols.push_back(std::move(c));
    if (n2)
        for (auto& c : a.delbar(s2).columns())
            cols.push_back(std::move(c));
    auto x = solve(SparseMatrix::from_columns(a.dim(bd), cols), target.at(bd));
    if (!x)
        return std::nullopt;
    SparseVec al, be;
    for (const auto& [j, c] : x->entries()) {
        if (j < n1)
            al.push_back(j, c);
        else
            be.push_back(static_cast<uint32_t>(j - n1), c);
    }
    return std::pair<Element, Element>{n1 ? Element(s1, al) : Element(), n2 ? Element(s2, be) : Element()};
}

std::vector<SliceCheck> check_ideal(const Bicomplex& a, const std::vector<Element>& n_gens, const SliceFamily& c,
                                    int max_total, bool with_witnesses)
{
    std::vector<Bidegree> bds;
    for (int t = 0; t <= max_total; ++t)
        for (Bidegree bd : a.slices(t))
            bds.push_back(bd);
    std::vector<SliceCheck> out(bds.size());
    parallel_for(bds.size(), [&](std::size_t i) {
        Bidegree bd = bds[i];
        SliceCheck& r = out[i];
        r.bd = bd;
        Subspace ideal = ideal_span(a, n_gens, bd, &c, true);
        r.ideal_dim = ideal.dim();
        if (ideal.is_zero())
            return;
        Subspace closed = intersect(ideal, ker_del_delbar(a, bd));
        auto q = quotient_basis(closed, im_ddbar(a, bd));
        if (!q.empty()) {
            r.bc_ok = false;
            r.bc_witness = Element(bd, q.front());
        }
        Subspace dd_closed = intersect(ideal, ker_ddbar(a, bd));
        q = quotient_basis(dd_closed, im_del_plus_delbar(a, bd));
        if (!q.empty()) {
            r.a_ok = false;
            r.a_witness = Element(bd, q.front());
        }
        if (!with_witnesses)
            return;
        if (r.bc_ok)
            for (const auto& v : closed.basis()) {
                Element e(bd, v);
                auto phi = ddbar_primitive(a, e, bd);
                if (!phi)
                    throw Error(ErrorKind::InternalContradiction, "∂∂̄-exact element without a primitive");
                r.witnesses.push_back({IdealWitness::Kind::DdbarPrimitive, bd, e, *phi, {}, {}});
            }
        if (r.a_ok)
            for (const auto& v : dd_closed.basis()) {
                Element e(bd, v);
                auto ab = del_delbar_split(a, e, bd);
                if (!ab)
                    throw Error(ErrorKind::InternalContradiction, "element of Im∂ + Im∂̄ without a decomposition");
                r.witnesses.push_back({IdealWitness::Kind::DelDelbarSplit, bd, e, {}, ab->first, ab->second});
            }
    });
    return out;
}

}  // namespace detail

using namespace detail;

namespace {

std::atomic<std::size_t> g_remark_checks{0};
std::atomic<std::size_t> g_remark_violations{0};

void collect(const std::map<Bidegree, std::vector<SplitGenerator>>& m, int max_degree, std::vector<Element>& out)
{
    for (const auto& [bd, gens] : m)
        if (bd.total() <= max_degree)
            for (const auto& g : gens)
                out.push_back(g.value());
}

Subspace ker_rho_of(const FreeCbba& a, const std::vector<uint32_t>& gens, int k)
{
    std::size_t m = gens.size();
    if (m == 0)
        return Subspace(0);
    if (k > a.top_degree() - 2)
        throw Error(ErrorKind::InsufficientTruncation,
                    "ker ρ in degree " + std::to_string(k) + " needs truncation >= " + std::to_string(k + 2));
    SliceFamily lower = generated_sub_cbba(a, k - 1, k);
    std::vector<Element> cols;
    for (uint32_t g : gens)
        cols.push_back(d(a, a.generator(g)));
    for (const auto& e : family_elements(a, lower, k))
        cols.push_back(d(a, e));
    TotalSpace ts(a, k + 1);
    std::vector<SparseVec> flat;
    for (const auto& c : cols)
        flat.push_back(ts.flatten(c));
    std::vector<SparseVec> proj;
    for (const auto& v : kernel_basis(SparseMatrix::from_columns(ts.dim(), flat))) {
        SparseVec w;
        for (const auto& [j, c] : v.entries())
            if (j < m)
                w.push_back(j, c);
        if (!w.empty())
            proj.push_back(std::move(w));
    }
    return Subspace::span(m, proj);
}

Subspace lower_linear_part(const FreeCbba& a, const std::vector<uint32_t>& gens, Bidegree bd)
{
    SliceFamily lower = generated_sub_cbba(a, bd.total() - 1, bd.total());
    std::vector<SparseVec> lin;
    Subspace slice = lower.at(a, bd);
    for (const auto& v : slice.basis()) {
        auto full = a.linear_part(Element(bd, v));
        SparseVec l;
        for (std::size_t j = 0; j < gens.size(); ++j)
            if (auto c = full.find(gens[j]))
                l.push_back(static_cast<uint32_t>(j), *c);
        if (!l.empty())
            lin.push_back(std::move(l));
    }
    return Subspace::span(gens.size(), lin);
}

Element gens_combination(const FreeCbba& a, const std::vector<uint32_t>& gens, const SparseVec& v)
{
    Element out;
    for (const auto& [j, c] : v.entries())
        out.axpy(c, a.generator(gens[j]));
    return out;
}

}  // namespace

std::vector<Element> SplittingCertificate::n_elements() const
{
    std::vector<Element> out;
    collect(n_basis, std::numeric_limits<int>::max(), out);
    return out;
}

std::vector<Element> SplittingCertificate::all_elements() const
{
    std::vector<Element> out;
    collect(c_basis, std::numeric_limits<int>::max(), out);
    collect(n_basis, std::numeric_limits<int>::max(), out);
    return out;
}

std::vector<Element> split_building(const Bicomplex& a, const SplittingCertificate& cert, int max_degree)
{
    std::vector<Element> values;
    collect(cert.c_basis, max_degree, values);
    collect(cert.n_basis, max_degree, values);
    std::vector<Element> out;
    for (auto& e : differential_closure(a, values))
        if (e.bidegree()->total() <= a.top_degree())
            out.push_back(std::move(e));
    return out;
}

Subspace ker_rho(const FreeCbba& a, int k) { return ker_rho_of(a, a.generators_of_total(k), k); }

Subspace ker_rho(const FreeCbba& a, Bidegree bd) { return ker_rho_of(a, a.generators_of(bd), bd.total()); }

Element purify_primitive(const FreeCbba& a, const Element& y)
{
    auto bdo = y.bidegree();
    if (!bdo)
        return Element();
    Bidegree bd = *bdo;
    int k = bd.total();
    Element dy = d(a, y);
    if (dy.is_zero())
        return Element();

    // Mixed-bidegree solution b in C(ΛV^{<=k-1}) of db = dy.
    SliceFamily lower = generated_sub_cbba(a, k - 1, k);
    auto basis = family_elements(a, lower, k);
    std::vector<Element> images;
    for (const auto& e : basis)
        images.push_back(d(a, e));
    auto coeffs = solve_combination(a, k + 1, images, dy);
    if (!coeffs)
        throw Error(ErrorKind::NoSolution, "dy is not in d C(ΛV^{<=" + std::to_string(k - 1) + "})", to_string(a, y));
    Element b_pq = combine(basis, *coeffs).component(bd);

    // b_pq + ∂̄φ1 - ∂φ2 with ∂∂̄φ1 = ∂(y - b_pq), ∂∂̄φ2 = ∂̄(y - b_pq).
    Element u = y - b_pq;
    Element du = del(a, u), bu = delbar(a, u);
    auto phi1 = ddbar_primitive(a, du, bd + Bidegree{1, 0});
    auto phi2 = ddbar_primitive(a, bu, bd + Bidegree{0, 1});
    if (!phi1)
        throw Error(ErrorKind::DdbarWitnessMissing, "∂(y - b) has no ∂∂̄-primitive", to_string(a, du));
    if (!phi2)
        throw Error(ErrorKind::DdbarWitnessMissing, "∂̄(y - b) has no ∂∂̄-primitive", to_string(a, bu));
    Element out = b_pq + delbar(a, *phi1) - del(a, *phi2);
    if (del(a, out) != del(a, y) || delbar(a, out) != delbar(a, y))
        throw Error(ErrorKind::InternalContradiction, "purified primitive does not match dy", to_string(a, y));
    return out;
}

Subspace split_ideal(const Bicomplex& a, const std::vector<Element>& n_gens, const SliceFamily& c, Bidegree bd)
{
    return ideal_span(a, n_gens, bd, &c, true);
}

SplittingCertificate split_search(const FreeCbba& a, int s)
{
    auto lemma = ddbar_check_up_to(a, s);
    if (!lemma.holds)
        throw Error(ErrorKind::SplittingObstructed,
                    "the ∂∂̄-Lemma up to degree " + std::to_string(s) + " fails in degree " + std::to_string(*lemma.failing),
                    to_string(a, *lemma.witness));
    SplittingCertificate cert;
    cert.algebra = a.name();
    cert.s = s;
    for (int k = 1; k <= s; ++k)
        for (int p = 0; p <= k; ++p) {
            Bidegree bd{p, k - p};
            auto gens = a.generators_of(bd);
            if (gens.empty())
                continue;
            Subspace kr = ker_rho(a, bd);
            // Generator directions already present in C(ΛV^{<=k-1}) (e.g. a
            // generator equal to ∂ of a lower one) lie in ker ρ trivially and
            // would purify to zero; they belong to N.
            Subspace present = lower_linear_part(a, gens, bd);
            auto& cs = cert.c_basis[bd];
            for (const auto& v : quotient_basis(kr, present)) {
                Element y = gens_combination(a, gens, v);
                cs.push_back({y, purify_primitive(a, y)});
            }
            auto& ns = cert.n_basis[bd];
            for (const auto& v : present.basis())
                ns.push_back({gens_combination(a, gens, v), Element()});
            for (const auto& v : quotient_basis(Subspace::full(gens.size()), kr))
                ns.push_back({gens_combination(a, gens, v), Element()});
        }

    attach_ideal_witnesses(a, cert, ddbar_scope(a), ErrorKind::SplittingObstructed);
    return cert;
}

void attach_ideal_witnesses(const FreeCbba& a, SplittingCertificate& cert, int scope, ErrorKind on_failure)
{
    cert.witnesses.clear();
    SliceFamily c = generated_subalgebra(a, split_building(a, cert, cert.s), scope);
    for (auto& r : check_ideal(a, cert.n_elements(), c, scope, true)) {
        if (!r.bc_ok)
            throw Error(on_failure, "closed element of the ideal at " + r.bd.to_string() + " is not ∂∂̄-exact",
                        to_string(a, *r.bc_witness));
        if (!r.a_ok)
            throw Error(on_failure,
                        "∂∂̄-closed element of the ideal at " + r.bd.to_string() + " is not in Im∂ + Im∂̄",
                        to_string(a, *r.a_witness));
        for (auto& w : r.witnesses)
            cert.witnesses.push_back(std::move(w));
    }
    cert.ideal_checked_through = scope;
}

VerifyReport split_verify(const FreeCbba& a, const SplittingCertificate& cert, int scope)
{
    VerifyReport rep;
    auto fail = [&](std::string msg, std::optional<Bidegree> bd, std::optional<Element> w) {
        if (rep.failures.empty()) {
            rep.failing = bd;
            rep.witness = std::move(w);
        }
        rep.failures.push_back(std::move(msg));
    };

    std::set<Bidegree> covered;
    for (const auto* m : {&cert.c_basis, &cert.n_basis})
        for (const auto& [bd, _] : *m)
            covered.insert(bd);
    for (int t = 1; t <= scope; ++t)
        for (int p = 0; p <= t; ++p) {
            Bidegree bd{p, t - p};
            if (!a.generators_of(bd).empty() && !covered.count(bd))
                fail("coverage gap at " + bd.to_string(), bd, std::nullopt);
        }

    // Per-bidegree generator conditions.
    for (Bidegree bd : covered) {
        ++rep.bidegrees_checked;
        auto gens = a.generators_of(bd);
        auto cit = cert.c_basis.find(bd);
        auto nit = cert.n_basis.find(bd);
        const std::vector<SplitGenerator> none;
        const auto& cs = cit == cert.c_basis.end() ? none : cit->second;
        const auto& ns = nit == cert.n_basis.end() ? none : nit->second;
        if (bd.total() > a.top_degree() - 2) {
            fail("bidegree " + bd.to_string() + " is beyond the truncation headroom", bd, std::nullopt);
            continue;
        }

        std::vector<SparseVec> lin;
        bool homogeneous = true;
        for (const auto* list : {&cs, &ns})
            for (const auto& g : *list) {
                Element v = g.value();
                if (!v.is_zero() && v.bidegree() != bd) {
                    homogeneous = false;
                    fail("split generator is not homogeneous of bidegree " + bd.to_string(), bd, v);
                }
                SparseVec l;
                auto full = a.linear_part(v);
                for (std::size_t j = 0; j < gens.size(); ++j)
                    if (auto c = full.find(gens[j]))
                        l.push_back(static_cast<uint32_t>(j), *c);
                lin.push_back(std::move(l));
            }
        if (!homogeneous)
            continue;
        if (lin.size() != gens.size() || Subspace::span(gens.size(), lin).dim() != gens.size())
            fail("C + N is not a direct sum spanning the generators at " + bd.to_string(), bd, std::nullopt);

        SliceFamily lower = generated_sub_cbba(a, bd.total() - 1, bd.total());
        for (const auto* list : {&cs, &ns})
            for (const auto& g : *list)
                if (!g.subtrahend.is_zero() &&
                    (g.subtrahend.bidegree() != bd || !lower.at(a, bd).contains(g.subtrahend.at(bd))))
                    fail("subtrahend is not in the sub-cbba of lower generators at " + bd.to_string(), bd, g.subtrahend);

        for (const auto& g : cs) {
            Element v = g.value();
            if (!d(a, v).is_zero())
                fail("d(C) is not zero at " + bd.to_string(), bd, v);
        }

        if (!ns.empty()) {
            TotalSpace ts(a, bd.total() + 1);
            std::vector<SparseVec> imgs;
            for (const auto& g : ns)
                imgs.push_back(ts.flatten(d(a, g.value())));
            auto ker = kernel_basis(SparseMatrix::from_columns(ts.dim(), imgs));
            if (!ker.empty()) {
                Element w;
                for (const auto& [j, c] : ker.front().entries())
                    w.axpy(c, ns[j].value());
                fail("d is not injective on N at " + bd.to_string(), bd, w);
            }
        }
    }

    // The split generators must generate the same sub-cbba as the originals.
    int top = ddbar_scope(a);
    SliceFamily c = generated_subalgebra(a, split_building(a, cert, scope), top);
    if (c != generated_sub_cbba(a, scope, top))
        fail("the split generators do not generate C(ΛV^{<=" + std::to_string(scope) + "})", std::nullopt, std::nullopt);

    std::vector<Element> n_gens;
    collect(cert.n_basis, scope, n_gens);
    try {
        auto g = ddbar_check_global(a);
        rep.lemma_holds = g.holds;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::InsufficientTruncation)
            throw;
        rep.lemma_holds = false;
    }

    for (const auto& r : check_ideal(a, n_gens, c, top, false)) {
        if (!r.a_ok)
            fail("∂∂̄-closed ideal element not in Im∂ + Im∂̄ at " + r.bd.to_string(), r.bd, r.a_witness);
        if (!r.bc_ok)
            fail("closed ideal element not ∂∂̄-exact at " + r.bd.to_string(), r.bd, r.bc_witness);
        if (r.a_ok && rep.lemma_holds && r.ideal_dim > 0) {
            ++rep.remark_checks;
            if (!r.bc_ok) {
                ++rep.remark_violations;
                fail("Remark implication violated at " + r.bd.to_string(), r.bd, r.bc_witness);
            }
        }
    }
    g_remark_checks += rep.remark_checks;
    g_remark_violations += rep.remark_violations;

    // Stored witnesses: exact identities, closedness and ideal membership.
    std::map<Bidegree, Subspace> ideal_cache;
    for (const auto& w : cert.witnesses) {
        ++rep.witnesses_checked;
        if (w.bd.total() > top) {
            fail("witness beyond the checked range at " + w.bd.to_string(), w.bd, w.element);
            continue;
        }
        bool ok = w.kind == IdealWitness::Kind::DdbarPrimitive
                      ? ddbar(a, w.primitive) == w.element && d(a, w.element).is_zero()
                      : del(a, w.alpha) + delbar(a, w.beta) == w.element && ddbar(a, w.element).is_zero();
        auto it = ideal_cache.find(w.bd);
        if (it == ideal_cache.end())
            it = ideal_cache.emplace(w.bd, ideal_span(a, n_gens, w.bd, &c, true)).first;
        if (!ok || (!w.element.is_zero() && w.element.bidegree() != w.bd) || !it->second.contains(w.element.at(w.bd)))
            fail("witness does not verify at " + w.bd.to_string(), w.bd, w.element);
    }

    rep.passed = rep.failures.empty();
    return rep;
}

RemarkTally remark_tally() { return {g_remark_checks.load(), g_remark_violations.load()}; }

SStrongResult s_strong_check(const FreeCbba& a, int s)
{
    SStrongResult r;
    r.lemma = ddbar_check_up_to(a, s);
    if (!r.lemma->holds) {
        r.refuted = true;
        r.failure = "the ∂∂̄-Lemma up to degree " + std::to_string(s) + " fails in degree " + std::to_string(*r.lemma->failing);
        r.witness = r.lemma->witness;
        return r;
    }
    try {
        r.certificate = split_search(a, s);
        r.holds = true;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::SplittingObstructed)
            throw;
        r.failure = std::string("not certified: ") + e.what() + (e.witness().empty() ? "" : " (witness " + e.witness() + ")");
    }
    return r;
}

}  // namespace formality
