#include "formality_detail.hpp"

namespace formality {

using namespace detail;

namespace {

bool decomposable(const FreeCbba& a, const Element& e) { return a.linear_part(e).empty(); }

Bidegree pure_bidegree(const Element& e, const char* what)
{
    auto bd = e.bidegree();
    if (!bd)
        throw Error(ErrorKind::HypothesesUnmet, std::string(what) + " must be nonzero and of pure bidegree");
    return *bd;
}

// Leading generator of x and its coefficient.
std::pair<uint32_t, Scalar> leading_generator(const FreeCbba& a, const Element& x)
{
    auto lin = a.linear_part(x);
    if (lin.empty())
        throw Error(ErrorKind::HypothesesUnmet, "x_i must have a nonzero linear part", to_string(a, x));
    return {lin.entries().front().first, lin.entries().front().second};
}

// Closed elements of a family at bd.
Subspace closed_part(const Bicomplex& a, const SliceFamily& fam, Bidegree bd)
{
    return intersect(fam.at(a, bd), ker_del_delbar(a, bd));
}

// x_i's ideal I_i: generators ctx.n_gens + x_i inside C(ΛV_{i-1} ⊕ <x_i>).
Subspace ideal_with(const FreeCbba& a, const PromotionContext& ctx, const Element& x, Bidegree bd)
{
    auto building = ctx.building(a);
    for (auto& e : differential_closure(a, {x}))
        building.push_back(std::move(e));
    SliceFamily c = generated_subalgebra(a, building, ctx.max_total);
    auto gens = ctx.n_gens;
    gens.push_back(x);
    return ideal_span(a, gens, bd, &c, true);
}

Scalar omega_coordinate(const Bicomplex& a, const CohomologySpace& top, const Element& e)
{
    auto c = top.coordinates(a, e);
    if (!c)
        throw Error(ErrorKind::InternalContradiction, "element paired into H_A^{n,n} is not ∂∂̄-closed", to_string(a, e));
    return (*c)[0];
}

}  // namespace

std::vector<Element> PromotionContext::building(const Bicomplex& a) const
{
    std::vector<Element> gens = c_gens;
    gens.insert(gens.end(), n_gens.begin(), n_gens.end());
    std::vector<Element> out;
    for (auto& e : differential_closure(a, gens))
        if (e.bidegree()->total() <= max_total)
            out.push_back(std::move(e));
    return out;
}

SliceFamily PromotionContext::algebra(const Bicomplex& a) const { return generated_subalgebra(a, building(a), max_total); }

EtaNormalForm rewrite_eta(const FreeCbba& a, const Element& eta, const Element& x_i, const PromotionContext& ctx, int n)
{
    Bidegree xb = pure_bidegree(x_i, "x_i");
    Bidegree nn{n, n};
    int k = xb.total();
    bool del_lin = !decomposable(a, del(a, x_i));
    bool delbar_lin = !decomposable(a, delbar(a, x_i));
    EtaNormalForm out;
    if (k >= n)
        out.case_label = del_lin && delbar_lin ? "1.1" : (del_lin || delbar_lin ? "1.2" : "1.3");
    else if (k == n - 1 && del_lin && delbar_lin)
        out.case_label = n % 2 == 0 ? "2.1" : "2.2";
    else
        throw Error(ErrorKind::HypothesesUnmet,
                    "needs |x_i| >= n, or |x_i| = n-1 with ∂x_i and ∂̄x_i non-decomposable", to_string(a, x_i));
    if (!eta.is_zero() && eta.bidegree() != nn)
        throw Error(ErrorKind::HypothesesUnmet, "η must have bidegree " + nn.to_string(), to_string(a, eta));
    if (!ddbar(a, eta).is_zero())
        throw Error(ErrorKind::HypothesesUnmet, "η must be ∂∂̄-closed", to_string(a, eta));
    if (!ideal_with(a, ctx, x_i, nn).contains(eta.at(nn)))
        throw Error(ErrorKind::HypothesesUnmet, "η is not in the ideal I_i", to_string(a, eta));

    // λ: coefficient of x_i^2 when |x_i| = (n/2, n/2).
    out.lambda = Scalar(0);
    if (xb + xb == nn && xb.parity() == 0) {
        auto [g, c] = leading_generator(a, x_i);
        if (auto idx = a.monomial_index(nn, Monomial{{{g, 2}}}))
            out.lambda = eta.at(nn).at(*idx) / (c * c);
        if (!out.lambda.is_zero())
            throw Error(ErrorKind::InternalContradiction, "η has a nonzero x_i^2 coefficient", to_string(a, eta));
    }

    // One linear system: η = η₀ + τ·x_i + ∂α + ∂̄β.
    SliceFamily c = ctx.algebra(a);
    std::vector<Element> cols;
    std::vector<int> role;
    std::vector<Element> sources;
    auto push = [&](int r, Element src, Element col) {
        if (col.is_zero())
            return;
        role.push_back(r);
        sources.push_back(std::move(src));
        cols.push_back(std::move(col));
    };
    for (const auto& v : ideal_span(a, ctx.n_gens, nn, &c, true).basis())
        push(0, Element(nn, v), Element(nn, v));
    Bidegree tb = nn - xb;
    if (tb.valid())
        for (const auto& v : closed_part(a, c, tb).basis()) {
            Element t(tb, v);
            push(1, t, multiply(a, t, x_i));
        }
    for (Bidegree step : {Bidegree{1, 0}, Bidegree{0, 1}}) {
        Bidegree src = nn - step;
        for (uint32_t j = 0; j < a.dim(src); ++j) {
            Element e = Element::basis(src, j);
            push(step.p ? 2 : 3, e, step.p ? del(a, e) : delbar(a, e));
        }
    }
    auto sol = solve_combination(a, 2 * n, cols, eta);
    if (!sol)
        throw Error(ErrorKind::InternalContradiction, "η admits no decomposition η₀ + τ·x_i + ∂α + ∂̄β",
                    to_string(a, eta));
    for (const auto& [j, v] : sol->entries()) {
        Element* slot = role[j] == 0 ? &out.eta0 : role[j] == 1 ? &out.tau : role[j] == 2 ? &out.alpha : &out.beta;
        slot->axpy(v, sources[j]);
    }
    Element rest = eta - out.eta0 - multiply(a, out.tau, x_i) - del(a, out.alpha) - delbar(a, out.beta);
    if (!rest.is_zero() || !d(a, out.tau).is_zero())
        throw Error(ErrorKind::InternalContradiction, "η normal form does not recompose", to_string(a, rest));
    return out;
}

Adjustment adjust_generator(const FreeCbba& a, const Element& x_i, const PromotionContext& ctx, int n)
{
    Bidegree xb = pure_bidegree(x_i, "x_i");
    Bidegree nn{n, n};
    Adjustment out;
    Bidegree zb = nn - xb;
    if (!zb.valid())
        return out;
    auto zs = cohomology(a, CohomologyKind::Aeppli, zb);
    if (zs.dim() == 0)
        return out;
    auto top = cohomology(a, CohomologyKind::Aeppli, nn);
    if (top.dim() != 1)
        throw Error(ErrorKind::PreconditionFailed, "H_A^{n,n} is not one-dimensional");
    std::size_t m = zs.dim();

    // (k, c) with ∂∂̄(k + Σ c_j z_j·x_i) = 0, k in I_{i-1}^{n,n}.
    SliceFamily c = ctx.algebra(a);
    auto ks = as_elements(nn, ideal_span(a, ctx.n_gens, nn, &c, true).basis());
    std::vector<Element> terms = ks;
    for (const auto& z : zs.representatives)
        terms.push_back(multiply(a, z, x_i));
    Bidegree up = nn + kDdbar;
    std::vector<SparseVec> cols;
    for (const auto& t : terms)
        cols.push_back(ddbar(a, t).at(up));
    auto kernel = kernel_basis(SparseMatrix::from_columns(a.dim(up), cols));

    // λ on the admissible c-subspace.
    Echelon admissible(m, true);
    std::vector<Scalar> lambda_of;
    for (const auto& v : kernel) {
        Element e;
        SparseVec cpart;
        for (const auto& [j, x] : v.entries()) {
            e.axpy(x, terms[j]);
            if (j >= ks.size())
                cpart.push_back(static_cast<uint32_t>(j - ks.size()), x);
        }
        Scalar lam = omega_coordinate(a, top, e);
        if (cpart.empty()) {
            if (!lam.is_zero())
                throw Error(ErrorKind::PromotionObstructed,
                            "a ∂∂̄-closed element of I_{i-1} at " + nn.to_string() + " is not in Im∂ + Im∂̄",
                            to_string(a, e));
            continue;
        }
        if (auto comb = admissible.express(cpart)) {
            Scalar expect;
            for (const auto& [r, y] : comb->entries())
                expect += y * lambda_of[r];
            if (expect != lam)
                throw Error(ErrorKind::InternalContradiction, "λ is not determined by z", to_string(a, e));
            continue;
        }
        admissible.insert(cpart);
        lambda_of.push_back(lam);
    }

    // Functional on the z-coordinates: λ on the admissible part, zero on the
    // RREF complement.
    std::vector<SparseVec> rows;
    std::vector<Scalar> rhs;
    for (const auto& row : admissible.rows()) {
        auto comb = admissible.express(row);
        Scalar val;
        for (const auto& [i, y] : comb->entries())
            val += y * lambda_of[i];
        rows.push_back(row);
        rhs.push_back(val);
    }
    for (const auto& w : quotient_basis(Subspace::full(m), Subspace::from_echelon(admissible))) {
        rows.push_back(w);
        rhs.push_back(Scalar(0));
    }
    SparseMatrix sys(m, m);
    for (std::size_t r = 0; r < m; ++r)
        for (const auto& [j, x] : rows[r].entries())
            sys.set(r, j, x);
    SparseVec rhs_vec;
    for (std::size_t r = 0; r < m; ++r)
        if (!rhs[r].is_zero())
            rhs_vec.push_back(static_cast<uint32_t>(r), rhs[r]);
    auto lam = solve(sys, rhs_vec);
    if (!lam)
        throw Error(ErrorKind::InternalContradiction, "λ functional is not determined");
    out.lambdas.assign(m, Scalar(0));
    for (const auto& [j, x] : lam->entries())
        out.lambdas[j] = x;
    if (lam->empty())
        return out;

    // [z_j]_A·[ψ]_BC = λ_j[ω]_A.
    auto bc = cohomology(a, CohomologyKind::BottChern, xb);
    if (bc.dim() != m)
        throw Error(ErrorKind::PairingSingular, "pairing at " + xb.to_string() + " is not square");
    SparseMatrix pairing(m, m);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t l = 0; l < m; ++l)
            pairing.set(j, l, omega_coordinate(a, top, multiply(a, zs.representatives[j], bc.representatives[l])));
    if (rref(pairing).rank() != m)
        throw Error(ErrorKind::PairingSingular, "pairing matrix at " + xb.to_string() + " is singular");
    auto mu = solve(pairing, *lam);
    Element target;
    for (const auto& [l, x] : mu->entries())
        target.axpy(x, bc.representatives[l]);

    // A closed representative inside C(ΛV_{i-1}).
    std::vector<Element> reps = as_elements(xb, closed_part(a, c, xb).basis());
    std::size_t nclosed = reps.size();
    Bidegree src = xb - kDdbar;
    if (src.valid())
        for (uint32_t j = 0; j < a.dim(src); ++j)
            reps.push_back(ddbar(a, Element::basis(src, j)));
    auto coeffs = solve_combination(a, xb.total(), reps, target);
    if (!coeffs)
        throw Error(ErrorKind::PromotionObstructed,
                    "the Bott-Chern class needed to adjust the generator has no closed representative in the sub-cbba",
                    to_string(a, target));
    for (const auto& [j, x] : coeffs->entries())
        if (j < nclosed)
            out.psi.axpy(x, reps[j]);
    return out;
}

SplittingCertificate promote(const FreeCbba& a, int n, PromotionLog* log)
{
    if (n < 1)
        throw Error(ErrorKind::PreconditionFailed, "n must be positive");
    if (!a.generators_of_total(1).empty())
        throw Error(ErrorKind::PreconditionFailed, "promotion needs a simply connected model (no degree-1 generators)");
    if (a.top_degree() < 2 * n + 2)
        throw Error(ErrorKind::InsufficientTruncation, "promotion needs truncation >= " + std::to_string(2 * n + 2));
    auto pairing = pairing_check(a, n);
    if (!pairing.holds)
        throw Error(ErrorKind::PreconditionFailed,
                    "not " + std::to_string(n) + "-SD: " + pairing.failure +
                        (pairing.failing ? " at " + pairing.failing->to_string() : ""),
                    pairing.witness);
    auto start = s_strong_check(a, n - 1);
    if (!start.holds)
        throw Error(ErrorKind::PreconditionFailed, "not " + std::to_string(n - 1) + "-strongly formal: " + start.failure,
                    start.witness ? to_string(a, *start.witness) : "");

    SplittingCertificate cert = std::move(*start.certificate);
    PromotionContext ctx;
    ctx.max_total = a.top_degree() - 2;
    for (const auto& [bd, gens] : cert.c_basis)
        for (const auto& g : gens)
            ctx.c_gens.push_back(g.value());
    for (const auto& [bd, gens] : cert.n_basis)
        for (const auto& g : gens)
            ctx.n_gens.push_back(g.value());
    Bidegree nn{n, n};
    auto gens_element = [&](const std::vector<uint32_t>& gens, const SparseVec& v) {
        Element out;
        for (const auto& [j, c] : v.entries())
            out.axpy(c, a.generator(gens[j]));
        return out;
    };

    for (int k = n; k <= 2 * n; ++k) {
        if (generated_subalgebra(a, ctx.building(a), ctx.max_total) != generated_sub_cbba(a, k - 1, ctx.max_total))
            throw Error(ErrorKind::InternalContradiction,
                        "modified generators changed C(ΛV^{<=" + std::to_string(k - 1) + "})");
        if (log)
            ++log->snapshot_checks;

        struct Pending {
            Bidegree bd;
            Element x;
        };
        std::vector<Pending> case2;
        for (int p = 0; p <= k; ++p) {
            Bidegree bd{p, k - p};
            auto gens = a.generators_of(bd);
            if (gens.empty())
                continue;
            Subspace kr = ker_rho(a, bd);
            SliceFamily lower = generated_sub_cbba(a, k - 1, k);
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
            Subspace present = Subspace::span(gens.size(), lin);
            auto& cs = cert.c_basis[bd];
            auto& ns = cert.n_basis[bd];
            // Case 1: x_i in ker ρ, purified and appended to C.
            for (const auto& v : quotient_basis(kr, present)) {
                Element y = gens_element(gens, v);
                Element b = purify_primitive(a, y);
                cs.push_back({y, b});
                ctx.c_gens.push_back(y - b);
                if (log)
                    log->steps.push_back({gens[v.leading()], true, b});
            }
            for (const auto& v : present.basis()) {
                Element y = gens_element(gens, v);
                ns.push_back({y, Element()});
                ctx.n_gens.push_back(y);
            }
            for (const auto& v : quotient_basis(Subspace::full(gens.size()), kr))
                case2.push_back({bd, gens_element(gens, v)});
        }

        // Case 2: appended to N after adjustment against the pairing.
        for (const auto& [bd, x] : case2) {
            if (bd.p <= n && bd.q <= n) {
                Subspace ideal = ideal_with(a, ctx, x, nn);
                for (const auto& v : intersect(ideal, ker_ddbar(a, nn)).basis()) {
                    rewrite_eta(a, Element(nn, v), x, ctx, n);
                    if (log)
                        ++log->eta_rewrites;
                }
            }
            Adjustment adj = adjust_generator(a, x, ctx, n);
            Element xh = x - adj.psi;
            if (bd.p <= n && bd.q <= n) {
                Subspace ideal = ideal_with(a, ctx, xh, nn);
                auto q = quotient_basis(intersect(ideal, ker_ddbar(a, nn)), im_del_plus_delbar(a, nn));
                if (!q.empty())
                    throw Error(ErrorKind::PromotionObstructed,
                                "∂∂̄-closed ideal element at " + nn.to_string() + " is not in Im∂ + Im∂̄",
                                to_string(a, Element(nn, q.front())));
            }
            cert.n_basis[bd].push_back({x, adj.psi});
            ctx.n_gens.push_back(xh);
            if (log)
                log->steps.push_back({a.linear_part(x).entries().front().first, false, adj.psi});
        }
    }

    cert.s = 2 * n;
    cert.global_to_2n = true;
    attach_ideal_witnesses(a, cert, ctx.max_total, ErrorKind::PromotionObstructed);
    return cert;
}

}  // namespace formality
