#include "formality_detail.hpp"

#include "formality/lemma.hpp"
#include "formality/model.hpp"

#include <set>

namespace formality {

using namespace detail;

namespace {

Element eval_monomial(const ModelMap& f, const Monomial& m)
{
    Element out = f.target->unit();
    for (const auto& [g, e] : m.factors)
        for (uint32_t k = 0; k < e && !out.is_zero(); ++k)
            out = multiply(*f.target, out, f.images[g]);
    return out;
}

class NameSource {
public:
    explicit NameSource(const Presentation& p)
    {
        for (const auto& s : p.symbols)
            taken_.insert(s.name);
    }
    bool free(const std::string& n) const { return !taken_.count(n); }
    void take(const std::string& n) { taken_.insert(n); }

    /// prefix, prefix2, prefix3, ... such that every suffixed name is free.
    std::string family(const std::string& prefix, std::initializer_list<const char*> suffixes)
    {
        for (int& k = counters_[prefix];; ++k) {
            std::string base = k <= 1 ? prefix : prefix + std::to_string(k);
            bool ok = true;
            for (const char* sfx : suffixes)
                ok = ok && free(base + sfx);
            if (ok) {
                k = std::max(k, 1) + 1;
                for (const char* sfx : suffixes)
                    take(base + sfx);
                return base;
            }
        }
    }
    std::string closed(const std::string& preferred)
    {
        if (!preferred.empty() && free(preferred)) {
            take(preferred);
            return preferred;
        }
        for (;; ++closed_) {
            std::string n = "y" + std::to_string(closed_);
            if (free(n)) {
                take(n);
                ++closed_;
                return n;
            }
        }
    }

private:
    std::set<std::string> taken_;
    std::map<std::string, int> counters_;
    int closed_ = 1;
};

std::shared_ptr<const FreeCbba> build(const Presentation& p)
{
    return std::dynamic_pointer_cast<const FreeCbba>(validate(p));
}

// Target element as a name when it is exactly one basis element.
std::string single_basis_name(const Bicomplex& t, const Element& e)
{
    auto bd = e.bidegree();
    if (!bd)
        return {};
    const auto& v = e.at(*bd);
    if (v.entries().size() != 1 || v.entries().front().second != Scalar(1))
        return {};
    return t.basis_label(*bd, v.entries().front().first);
}

void check_chain_map(const ModelMap& f)
{
    for (uint32_t g = 0; g < f.model->num_generators(); ++g) {
        const Element& img = f.images[g];
        Bidegree bd = f.model->generator_symbol(g).bd;
        if (!img.is_zero() && img.bidegree() != bd)
            throw Error(ErrorKind::PreconditionFailed,
                        "image of " + f.model->generator_symbol(g).name + " does not have bidegree " + bd.to_string());
        if (evaluate(f, f.model->generator_del(g)) != del(*f.target, img) ||
            evaluate(f, f.model->generator_delbar(g)) != delbar(*f.target, img))
            throw Error(ErrorKind::PreconditionFailed,
                        "the generator images do not commute with the differentials",
                        f.model->generator_symbol(g).name);
    }
}

struct DegreeDefect {
    std::vector<std::pair<Bidegree, Element>> kernel;  // closed model elements mapping to zero classes
    std::vector<std::pair<Bidegree, Element>> a_kernel;  // ∂∂̄-closed ones mapping to zero Aeppli classes
    std::vector<std::pair<Bidegree, Element>> cokernel;  // target classes missed
};

std::vector<SparseVec> class_columns(const ModelMap& f, const CohomologySpace& src,
                                     const std::optional<CohomologySpace>& tgt)
{
    std::vector<SparseVec> cols;
    for (const auto& rep : src.representatives) {
        SparseVec col;
        if (tgt) {
            auto c = tgt->coordinates(*f.target, evaluate(f, rep));
            if (!c)
                throw Error(ErrorKind::InternalContradiction, "the generator images do not form a chain map",
                            to_string(*f.model, rep));
            for (std::size_t j = 0; j < c->size(); ++j)
                if (!(*c)[j].is_zero())
                    col.push_back(static_cast<uint32_t>(j), (*c)[j]);
        }
        cols.push_back(std::move(col));
    }
    return cols;
}

std::vector<Element> kernel_elements(const CohomologySpace& src, const std::vector<SparseVec>& cols, std::size_t rows)
{
    std::vector<Element> out;
    for (const auto& v : kernel_basis(SparseMatrix::from_columns(rows, cols))) {
        Element e;
        for (const auto& [j, c] : v.entries())
            e.axpy(c, src.representatives[j]);
        out.push_back(std::move(e));
    }
    return out;
}

DegreeDefect defects(const ModelMap& f, int k, bool with_aeppli)
{
    DegreeDefect out;
    for (int p = 0; p <= k; ++p) {
        Bidegree bd{p, k - p};
        if (f.model->dim(bd) == 0 && f.target->dim(bd) == 0)
            continue;
        std::optional<CohomologySpace> tgt;
        if (f.target->dim(bd) != 0)
            tgt = cohomology(*f.target, CohomologyKind::BottChern, bd);
        std::size_t tdim = tgt ? tgt->dim() : 0;
        auto src = cohomology(*f.model, CohomologyKind::BottChern, bd);
        auto cols = class_columns(f, src, tgt);
        for (auto& e : kernel_elements(src, cols, tdim))
            out.kernel.emplace_back(bd, std::move(e));
        if (tgt)
            for (const auto& w : quotient_basis(Subspace::full(tdim), Subspace::span(tdim, cols))) {
                Element t;
                for (const auto& [j, c] : w.entries())
                    t.axpy(c, tgt->representatives[j]);
                out.cokernel.emplace_back(bd, std::move(t));
            }
        if (!with_aeppli)
            continue;
        std::optional<CohomologySpace> tgt_a;
        if (f.target->dim(bd) != 0)
            tgt_a = cohomology(*f.target, CohomologyKind::Aeppli, bd);
        auto src_a = cohomology(*f.model, CohomologyKind::Aeppli, bd);
        auto cols_a = class_columns(f, src_a, tgt_a);
        for (auto& e : kernel_elements(src_a, cols_a, tgt_a ? tgt_a->dim() : 0))
            out.a_kernel.emplace_back(bd, std::move(e));
    }
    return out;
}

// x with op(x) = rhs, op: A^{bd - step} -> A^{bd}.
std::optional<Element> solve_single(const Bicomplex& t, Bidegree bd, Bidegree step, const Element& rhs)
{
    if (rhs.is_zero())
        return Element();
    Bidegree src = bd - step;
    if (!src.valid() || t.dim(src) == 0)
        return std::nullopt;
    auto x = solve(step.p ? t.del(src) : t.delbar(src), rhs.at(bd));
    if (!x)
        return std::nullopt;
    return Element(src, *x);
}

Poly negated(Poly p)
{
    for (auto& t : p)
        t.coef = -t.coef;
    return p;
}

// One Aeppli kernel class at bd, preferring a representative that is ∂̄- or
// ∂-closed after adding an exact term, so that half a gadget suffices.
Element pick_aeppli(const FreeCbba& a, Bidegree bd, const std::vector<Element>& reps)
{
    for (Bidegree step : {Bidegree{0, 1}, Bidegree{1, 0}}) {
        Bidegree up = bd + step;
        if (a.dim(up) == 0)
            return reps.front();
        Subspace im = im_ddbar(a, up);
        std::vector<SparseVec> cols;
        for (const auto& m : reps)
            cols.push_back(im.reduce((step.p ? del(a, m) : delbar(a, m)).at(up)));
        auto ker = kernel_basis(SparseMatrix::from_columns(a.dim(up), cols));
        if (ker.empty())
            continue;
        Element m;
        for (const auto& [j, c] : ker.front().entries())
            m.axpy(c, reps[j]);
        Element dm = step.p ? del(a, m) : delbar(a, m);
        if (dm.is_zero())
            return m;
        auto phi = ddbar_primitive(a, dm.scaled(step.p ? -1 : 1), up);
        if (!phi)
            throw Error(ErrorKind::InternalContradiction, "reduction of an Aeppli class failed", to_string(a, m));
        // ∂̄(m + ∂φ) = ∂̄m - ∂∂̄φ; ∂(m + ∂̄φ) = ∂m + ∂∂̄φ.
        return m + (step.p ? delbar(a, *phi) : del(a, *phi));
    }
    return reps.front();
}

// Kills the Aeppli class of a ∂∂̄-closed m with f(m) ∈ Im ∂ + Im ∂̄ by
// generators a, b with m = ∂a + ∂̄b:
//   ∂a = ap, ∂̄a = aq, ∂̄ap = ∂̄m, ∂aq = -∂̄m,
//   ∂b = bp, ∂̄b = m - ap, ∂̄bp = -∂m.
// Only the b half is needed when ∂̄m = 0 (then ∂̄b = m), only the a half
// when ∂m = 0 (then ∂a = m).
void add_gadget(Presentation& pres, ModelMap& f, NameSource& names, Bidegree bd, const Element& m,
                CompletionReport& report)
{
    const FreeCbba& a = *f.model;
    const Bicomplex& t = *f.target;
    Element dm = del(a, m);
    Element dbm = delbar(a, m);
    Element fm = evaluate(f, m);
    auto fail = [&](ErrorKind kind, const std::string& what) {
        throw Error(kind, what + " at " + bd.to_string(), to_string(a, m));
    };
    if (dm.is_zero() && dbm.is_zero())
        fail(ErrorKind::InternalContradiction, "a closed Aeppli kernel class survived the Bott-Chern step");
    bool need_a = !dbm.is_zero();
    bool need_b = !dm.is_zero();
    if ((need_a && bd.p == 0) || (need_b && bd.q == 0))
        fail(ErrorKind::UnsupportedInput, "an Aeppli kernel class cannot be killed by a gadget");

    Element alpha, beta;
    if (need_a && need_b) {
        auto split = del_delbar_split(t, fm, bd);
        if (!split)
            fail(ErrorKind::InternalContradiction, "image of an Aeppli kernel class is not ∂ + ∂̄ exact");
        alpha = split->first;
        beta = split->second;
    } else if (need_b) {
        auto x = solve_single(t, bd, Bidegree{0, 1}, fm);
        if (!x)
            fail(ErrorKind::InternalContradiction, "image of an Aeppli kernel class is not ∂̄-exact");
        beta = *x;
    } else {
        auto x = solve_single(t, bd, Bidegree{1, 0}, fm);
        if (!x)
            fail(ErrorKind::InternalContradiction, "image of an Aeppli kernel class is not ∂-exact");
        alpha = *x;
    }

    Poly mp = element_to_poly(a, m);
    std::optional<uint32_t> ap;
    if (need_a) {
        std::string s = names.family("s", {"", "p", "q"});
        Bidegree abd = bd - Bidegree{1, 0};
        uint32_t g = pres.add_symbol(s, abd);
        uint32_t gq = pres.add_symbol(s + "q", abd + Bidegree{0, 1});
        Poly dbmp = element_to_poly(a, dbm);
        if (need_b) {
            ap = pres.add_symbol(s + "p", bd);
            pres.del[g] = Poly{Term{Scalar(1), {*ap}}};
            pres.delbar[*ap] = dbmp;
            f.images.push_back(alpha);
            f.images.push_back(delbar(t, alpha));
            f.images.push_back(del(t, alpha));
        } else {
            pres.del[g] = mp;
            f.images.push_back(alpha);
            f.images.push_back(delbar(t, alpha));
        }
        pres.delbar[g] = Poly{Term{Scalar(1), {gq}}};
        pres.del[gq] = negated(dbmp);
        report.gadgets_added.push_back(s);
    }
    if (need_b) {
        std::string s = names.family("t", {"", "p"});
        Bidegree bbd = bd - Bidegree{0, 1};
        uint32_t g = pres.add_symbol(s, bbd);
        uint32_t gp = pres.add_symbol(s + "p", bbd + Bidegree{1, 0});
        Poly rhs = mp;
        if (ap)
            rhs.push_back(Term{Scalar(-1), {*ap}});
        pres.delbar[g] = std::move(rhs);
        pres.del[g] = Poly{Term{Scalar(1), {gp}}};
        pres.delbar[gp] = negated(element_to_poly(a, dm));
        f.images.push_back(beta);
        f.images.push_back(del(t, beta));
        report.gadgets_added.push_back(s);
    }
}

}  // namespace

Element evaluate(const ModelMap& f, const Element& e)
{
    Element out;
    for (const auto& [bd, v] : e.parts()) {
        const auto& basis = f.model->monomial_basis(bd);
        for (const auto& [i, c] : v.entries())
            out.axpy(c, eval_monomial(f, basis[i]));
    }
    return out;
}

Poly element_to_poly(const FreeCbba& a, const Element& e)
{
    Poly out;
    for (const auto& [bd, v] : e.parts()) {
        const auto& basis = a.monomial_basis(bd);
        for (const auto& [i, c] : v.entries()) {
            Term t{c, {}};
            for (const auto& [g, k] : basis[i].factors)
                t.factors.insert(t.factors.end(), k, g);
            out.push_back(std::move(t));
        }
    }
    return out;
}

bool CompletionReport::dims_match() const
{
    return std::all_of(rows.begin(), rows.end(), [](const DimRow& r) { return r.matches(); });
}

SplittingCertificate low_degree_certificate(const FreeCbba& a, int s)
{
    SplittingCertificate cert;
    cert.algebra = a.name();
    cert.s = s;
    for (uint32_t g = 0; g < a.num_generators(); ++g) {
        Bidegree bd = a.generator_symbol(g).bd;
        if (bd.total() > s)
            continue;
        Element x = a.generator(g);
        if (d(a, x).is_zero())
            cert.c_basis[bd].push_back({x, Element()});
        else
            cert.n_basis[bd].push_back({x, Element()});
    }
    attach_ideal_witnesses(a, cert, ddbar_scope(a), ErrorKind::InternalContradiction);
    auto rep = split_verify(a, cert, s);
    if (!rep.passed)
        throw Error(ErrorKind::InternalContradiction, "built certificate fails verification: " + rep.failures.front(),
                    rep.witness ? to_string(a, *rep.witness) : "");
    return cert;
}


CompletedModel complete_model(const Presentation& partial, const std::vector<Element>& images,
                              std::shared_ptr<const FiniteCbba> target, int D)
{
    if (!target->has_product())
        throw Error(ErrorKind::UnsupportedInput, "the completion target needs a multiplication");
    if (D < 2)
        throw Error(ErrorKind::TruncationTooSmall, "completion needs truncation >= 2");
    if (images.size() != partial.symbols.size())
        throw Error(ErrorKind::PreconditionFailed, "one image per partial generator is required");
    for (const auto& s : partial.symbols)
        if (s.bd.total() > D)
            throw Error(ErrorKind::TruncationTooSmall,
                        "generator " + s.name + " lies above the truncation " + std::to_string(D));
    auto lemma = ddbar_check_global(*target);
    if (!lemma.holds)
        throw Error(ErrorKind::TargetNotDdbar, "the target fails the ∂∂̄-Lemma",
                    lemma.witness ? to_string(*target, *lemma.witness) : "");

    Presentation pres = partial;
    pres.kind = AlgebraKind::Free;
    ModelMap f{nullptr, target, images};
    NameSource names(pres);
    CompletionReport report;
    report.truncation = D;

    pres.truncation = D + 1;
    f.model = build(pres);
    check_chain_map(f);

    for (int k = 1; k <= D; ++k)
        for (int round = 0;; ++round) {
            if (round > 64)
                throw Error(ErrorKind::InternalContradiction, "completion does not stabilize in degree " + std::to_string(k));
            // Aeppli classes in degree k see ∂∂̄ into k + 2.
            bool aeppli = k <= D - 2;
            int top = aeppli ? k + 2 : k + 1;
            for (const auto& s : pres.symbols)
                top = std::max(top, s.bd.total() + 1);
            pres.truncation = std::min(top, D + 1);
            f.model = build(pres);
            auto def = defects(f, k, aeppli);
            if (!def.kernel.empty()) {
                for (const auto& [bd, kappa] : def.kernel) {
                    if (!f.model->linear_part(kappa).empty())
                        throw Error(ErrorKind::PreconditionFailed,
                                    "a generator combination maps to zero in cohomology", to_string(*f.model, kappa));
                    if (bd.p == 0 || bd.q == 0)
                        throw Error(ErrorKind::UnsupportedInput,
                                    "a Bott-Chern kernel class at " + bd.to_string() + " cannot be killed by a triple",
                                    to_string(*f.model, kappa));
                    auto phi = ddbar_primitive(*target, evaluate(f, kappa), bd);
                    if (!phi)
                        throw Error(ErrorKind::InternalContradiction, "image of a kernel class is not ∂∂̄-exact",
                                    to_string(*f.model, kappa));
                    Poly kp = element_to_poly(*f.model, kappa);
                    Poly minus = negated(kp);
                    std::string base = names.family("r", {"", "p", "q"});
                    uint32_t r = pres.add_symbol(base, bd - kDdbar);
                    uint32_t rp = pres.add_symbol(base + "p", bd - Bidegree{0, 1});
                    uint32_t rq = pres.add_symbol(base + "q", bd - Bidegree{1, 0});
                    pres.del[r] = Poly{Term{Scalar(1), {rp}}};
                    pres.delbar[r] = Poly{Term{Scalar(1), {rq}}};
                    pres.delbar[rp] = std::move(minus);
                    pres.del[rq] = std::move(kp);
                    f.images.push_back(*phi);
                    f.images.push_back(del(*target, *phi));
                    f.images.push_back(delbar(*target, *phi));
                    report.triples_added.push_back(base);
                }
                continue;
            }
            if (!def.a_kernel.empty()) {
                Bidegree bd = def.a_kernel.front().first;
                std::vector<Element> reps;
                for (const auto& [b, m] : def.a_kernel)
                    if (b == bd)
                        reps.push_back(m);
                add_gadget(pres, f, names, bd, pick_aeppli(*f.model, bd, reps), report);
                continue;
            }
            if (!def.cokernel.empty()) {
                for (const auto& [bd, t] : def.cokernel) {
                    std::string name = names.closed(single_basis_name(*target, t));
                    pres.add_symbol(name, bd);
                    f.images.push_back(t);
                    report.closed_added.push_back(name);
                }
                continue;
            }
            break;
        }

    pres.truncation = D;
    f.model = build(pres);
    check_chain_map(f);
    for (int t = 0; t <= D - 2; ++t)
        for (int p = 0; p <= t; ++p) {
            Bidegree bd{p, t - p};
            DimRow row;
            row.bd = bd;
            if (f.model->dim(bd) != 0) {
                row.model_bc = cohomology(*f.model, CohomologyKind::BottChern, bd).dim();
                row.model_a = cohomology(*f.model, CohomologyKind::Aeppli, bd).dim();
            }
            std::optional<CohomologySpace> tgt;
            if (target->dim(bd) != 0) {
                tgt = cohomology(*target, CohomologyKind::BottChern, bd);
                row.target_bc = tgt->dim();
                row.target_a = cohomology(*target, CohomologyKind::Aeppli, bd).dim();
            }
            if (row.model_bc + row.target_bc + row.model_a + row.target_a == 0)
                continue;
            if (tgt && row.model_bc != 0) {
                std::vector<SparseVec> cols;
                for (const auto& rep : cohomology(*f.model, CohomologyKind::BottChern, bd).representatives) {
                    auto c = tgt->coordinates(*target, evaluate(f, rep));
                    SparseVec col;
                    for (std::size_t j = 0; j < c->size(); ++j)
                        if (!(*c)[j].is_zero())
                            col.push_back(static_cast<uint32_t>(j), (*c)[j]);
                    cols.push_back(std::move(col));
                }
                row.bc_rank = Subspace::span(row.target_bc, cols).dim();
            }
            report.rows.push_back(row);
        }
    return {std::move(f), std::move(report)};
}

}  // namespace formality
