#include "formality/lemma.hpp"
#include "formality/model.hpp"

namespace formality {

namespace {

// Basis element of the Hodge ring: x^j times nothing, a primitive or η.
struct HodgeBasis {
    enum class Kind { Power, Primitive, Eta } kind;
    int j = 0;
    int prim = -1;  // index into the primitive list
};

struct Primitive {
    Bidegree bd;
    int index = 0;
    std::string name;
};

std::string power_prefix(int j) { return j == 1 ? "x" : "x" + std::to_string(j); }

std::string primitive_name(Bidegree bd, int i, int dim)
{
    std::string s = bd.p < 10 && bd.q < 10 ? "p" + std::to_string(bd.p) + std::to_string(bd.q)
                                           : "p" + std::to_string(bd.p) + "_" + std::to_string(bd.q);
    return dim > 1 ? s + "_" + std::to_string(i + 1) : s;
}

std::vector<Primitive> primitives(const HodgeInput& h)
{
    int low = (h.n + 1) / 2 + 1;  // ⌈n/2⌉ + 1
    std::vector<Primitive> out;
    for (const auto& [bd, dim] : h.primitive_dims) {
        if (dim < 0 || !bd.valid())
            throw Error(ErrorKind::WidthViolated, "negative primitive dimension at " + bd.to_string());
        if (dim == 0)
            continue;
        int k = bd.total();
        if (k < low || k > h.n)
            throw Error(ErrorKind::WidthViolated, "primitive classes at " + bd.to_string() + " lie outside degrees " +
                                                      std::to_string(low) + ".." + std::to_string(h.n));
        Bidegree dual{k - bd.p, k - bd.q};
        auto it = h.primitive_dims.find(dual);
        if (it == h.primitive_dims.end() || it->second != dim)
            throw Error(ErrorKind::PreconditionFailed,
                        "primitive dimensions at " + bd.to_string() + " and " + dual.to_string() + " differ");
        for (int i = 0; i < dim; ++i)
            out.push_back({bd, i, primitive_name(bd, i, dim)});
    }
    return out;
}

void check_special(const HodgeInput& h)
{
    if (!h.special)
        return;
    int m = h.special->m;
    if (m < 1 || h.n != 4 * m - 1)
        throw Error(ErrorKind::SpecialBranchInconsistent, "the special branch needs n = 4m - 1");
    if (h.special->a.is_zero())
        throw Error(ErrorKind::SpecialBranchInconsistent, "a = 0 makes the pairing on H^{m,m} degenerate");
}

}  // namespace

Presentation hodge_ring(const HodgeInput& h)
{
    if (h.n < 2)
        throw Error(ErrorKind::PreconditionFailed, "the Hodge input needs n >= 2");
    check_special(h);
    auto prims = primitives(h);
    int n = h.n;

    Presentation p;
    p.name = h.name + "-ring";
    p.kind = AlgebraKind::Finite;
    p.sd_target = n;
    std::vector<HodgeBasis> basis;
    std::map<std::tuple<int, int, int>, uint32_t> index;  // (kind, j, prim)
    auto add = [&](HodgeBasis b, std::string name, Bidegree bd) {
        index[{static_cast<int>(b.kind), b.j, b.prim}] = p.add_symbol(std::move(name), bd);
        basis.push_back(b);
    };
    add({HodgeBasis::Kind::Power, 0, -1}, "u", {0, 0});
    for (int j = 1; j <= n; ++j)
        add({HodgeBasis::Kind::Power, j, -1}, power_prefix(j), {j, j});
    for (std::size_t e = 0; e < prims.size(); ++e) {
        Bidegree bd = prims[e].bd;
        for (int j = 0; j + bd.total() <= n; ++j)
            add({HodgeBasis::Kind::Primitive, j, static_cast<int>(e)},
                j == 0 ? prims[e].name : power_prefix(j) + "_" + prims[e].name, bd + Bidegree{j, j});
    }
    int m = h.special ? h.special->m : 0;
    if (h.special)
        for (int j = 0; j <= 2 * m - 1; ++j)
            add({HodgeBasis::Kind::Eta, j, -1}, j == 0 ? "eta" : power_prefix(j) + "_eta", {m + j, m + j});

    auto find = [&](HodgeBasis::Kind k, int j, int prim) -> std::optional<uint32_t> {
        auto it = index.find({static_cast<int>(k), j, prim});
        if (it == index.end())
            return std::nullopt;
        return it->second;
    };
    auto power = [&](int j) { return find(HodgeBasis::Kind::Power, j, -1); };
    auto product = [&](const HodgeBasis& a, const HodgeBasis& b) {
        Poly out;
        auto term = [&](Scalar c, std::optional<uint32_t> s) {
            if (s && !c.is_zero())
                out.push_back(Term{std::move(c), {*s}});
        };
        using K = HodgeBasis::Kind;
        if (a.kind == K::Power && b.kind == K::Power)
            term(1, power(a.j + b.j));
        else if (a.kind == K::Power || b.kind == K::Power) {
            const HodgeBasis& other = a.kind == K::Power ? b : a;
            int j = a.j + b.j;
            term(1, find(other.kind, j, other.prim));
        } else if (a.kind == K::Primitive && b.kind == K::Primitive) {
            const Primitive& e = prims[a.prim];
            const Primitive& f = prims[b.prim];
            int k = e.bd.total();
            if (f.bd.total() == k && f.bd == Bidegree{k - e.bd.p, k - e.bd.q} && e.index == f.index) {
                Scalar sign = (e.bd < f.bd || e.bd == f.bd || k % 2 == 0) ? Scalar(1) : Scalar(-1);
                term(sign, power(a.j + b.j + k));
            }
        } else if (a.kind == K::Eta && b.kind == K::Eta) {
            term(h.special->a, power(a.j + b.j + 2 * m));
            term(h.special->b, find(K::Eta, a.j + b.j + m, -1));
        }
        return out;
    };
    for (uint32_t i = 1; i < basis.size(); ++i)
        for (uint32_t j = i; j < basis.size(); ++j) {
            Poly v = product(basis[i], basis[j]);
            if (!v.empty())
                p.mul[{i, j}] = std::move(v);
        }
    p.mul[{0, 0}] = Poly{Term{Scalar(1), {0}}};
    return p;
}

BuiltModel central_model(const HodgeInput& h)
{
    auto target = std::dynamic_pointer_cast<const FiniteCbba>(validate(hodge_ring(h)));
    int n = h.n;
    Presentation partial;
    partial.name = h.name;
    partial.kind = AlgebraKind::Free;
    partial.sd_target = n;
    std::vector<Element> images;
    auto closed = [&](const std::string& name, Bidegree bd) {
        uint32_t g = partial.add_symbol(name, bd);
        auto idx = target->presentation().index_of(name);
        images.push_back(target->symbol(*idx));
        return g;
    };
    uint32_t x = closed("x", {1, 1});
    for (const auto& pr : primitives(h))
        closed(pr.name, pr.bd);
    if (h.special) {
        int m = h.special->m;
        uint32_t eta = closed("eta", {m, m});
        // ∂∂̄ξ = η² - a x^{2m} - b x^m η.
        Poly kappa{Term{Scalar(1), {eta, eta}}};
        kappa.push_back(Term{-h.special->a, std::vector<uint32_t>(2 * m, x)});
        std::vector<uint32_t> xm(m, x);
        xm.push_back(eta);
        if (!h.special->b.is_zero())
            kappa.push_back(Term{-h.special->b, xm});
        Poly minus = kappa;
        for (auto& t : minus)
            t.coef = -t.coef;
        uint32_t xi = partial.add_symbol("xi", {2 * m - 1, 2 * m - 1});
        uint32_t xip = partial.add_symbol("xip", {2 * m, 2 * m - 1});
        uint32_t xiq = partial.add_symbol("xiq", {2 * m - 1, 2 * m});
        partial.del[xi] = Poly{Term{Scalar(1), {xip}}};
        partial.delbar[xi] = Poly{Term{Scalar(1), {xiq}}};
        partial.delbar[xip] = std::move(minus);
        partial.del[xiq] = std::move(kappa);
        images.insert(images.end(), 3, Element());
    }

    BuiltModel out{complete_model(partial, images, target, 2 * n + 2), {}};
    const FreeCbba& a = *out.completed.map.model;
    out.certificate = low_degree_certificate(a, n - 1);
    bool has_n = !out.certificate.n_elements().empty();
    if (!h.special && (has_n || !out.certificate.witnesses.empty()))
        throw Error(ErrorKind::InternalContradiction, "generic central model has a nonzero ideal I_{n-1}");
    if (h.special && out.certificate.n_elements().size() != 1)
        throw Error(ErrorKind::InternalContradiction, "special central model must have N^{n-1} = <ξ>");
    return out;
}

RelationsReport relations_injectivity_check(std::shared_ptr<const FiniteCbba> h, int n)
{
    RelationsReport out;
    int top = n + 1;
    Presentation p;
    p.name = h->name() + "-classes";
    p.kind = AlgebraKind::Free;
    p.truncation = std::max(top, 1);
    std::vector<Element> images;
    std::map<Bidegree, CohomologySpace> bc;
    for (int t = 1; t <= top; ++t)
        for (Bidegree bd : h->slices(t)) {
            auto space = cohomology(*h, CohomologyKind::BottChern, bd);
            for (std::size_t i = 0; i < space.dim(); ++i) {
                p.add_symbol("c" + std::to_string(p.symbols.size() + 1), bd);
                images.push_back(space.representatives[i]);
            }
            bc.emplace(bd, std::move(space));
        }
    if (p.symbols.empty())
        return out;
    ModelMap f{std::dynamic_pointer_cast<const FreeCbba>(validate(p)), h, images};
    for (int t = 1; t <= top; ++t)
        for (int q = t; q >= 0; --q) {
            Bidegree bd{t - q, q};
            std::size_t dim = f.model->dim(bd);
            if (dim == 0)
                continue;
            auto it = bc.find(bd);
            std::size_t target_dim = it == bc.end() ? 0 : it->second.dim();
            std::vector<SparseVec> cols;
            for (uint32_t i = 0; i < dim && it != bc.end(); ++i) {
                auto c = it->second.coordinates(*h, evaluate(f, Element::basis(bd, i)));
                SparseVec col;
                for (std::size_t j = 0; j < c->size(); ++j)
                    if (!(*c)[j].is_zero())
                        col.push_back(static_cast<uint32_t>(j), (*c)[j]);
                cols.push_back(std::move(col));
            }
            std::size_t rank = Subspace::span(target_dim, cols).dim();
            if (rank < dim) {
                out.holds = false;
                out.failing_degree = t;
                out.failing_bd = bd;
                out.kernel_dim = dim - rank;
                return out;
            }
        }
    return out;
}

BuiltModel relations_model(std::shared_ptr<const FiniteCbba> h, int n)
{
    auto rel = relations_injectivity_check(h, n);
    if (!rel.holds)
        throw Error(ErrorKind::HypothesesUnmet, "multiplicative relation in degree " + std::to_string(*rel.failing_degree) +
                                                    " at " + rel.failing_bd->to_string() + " (below " +
                                                    std::to_string(n + 2) + ")");
    Presentation partial;
    partial.name = h->name() + "-model";
    partial.kind = AlgebraKind::Free;
    partial.sd_target = n;
    BuiltModel out{complete_model(partial, {}, h, 2 * n + 2), {}};
    out.certificate = low_degree_certificate(*out.completed.map.model, n - 1);
    if (!out.certificate.n_elements().empty())
        throw Error(ErrorKind::InternalContradiction, "no-relations model has non-closed generators below degree n");
    return out;
}

}  // namespace formality
