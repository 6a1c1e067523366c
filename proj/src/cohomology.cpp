#include "formality/cohomology.hpp"

#include <algorithm>

namespace formality {

const char* cohomology_kind_name(CohomologyKind k)
{
    switch (k) {
    case CohomologyKind::BottChern: return "bott-chern";
    case CohomologyKind::Aeppli: return "aeppli";
    case CohomologyKind::Dolbeault: return "dolbeault";
    case CohomologyKind::AntiDolbeault: return "anti-dolbeault";
    case CohomologyKind::DeRham: return "de-rham";
    }
    return "?";
}

std::optional<CohomologyKind> parse_cohomology_kind(const std::string& s)
{
    for (auto k : {CohomologyKind::BottChern, CohomologyKind::Aeppli, CohomologyKind::Dolbeault,
                   CohomologyKind::AntiDolbeault, CohomologyKind::DeRham})
        if (s == cohomology_kind_name(k))
            return k;
    if (s == "bc")
        return CohomologyKind::BottChern;
    if (s == "a")
        return CohomologyKind::Aeppli;
    return std::nullopt;
}

namespace {

Subspace column_span(const SparseMatrix& m) { return Subspace::span(m.rows(), m.columns()); }

Subspace kernel_of(const SparseMatrix& m) { return Subspace::span(m.cols(), kernel_basis(m)); }

SparseMatrix stack(const SparseMatrix& top, const SparseMatrix& bottom)
{
    SparseMatrix m(top.rows() + bottom.rows(), top.cols());
    for (std::size_t r = 0; r < top.rows(); ++r)
        m.row_mut(r) = top.row(r);
    for (std::size_t r = 0; r < bottom.rows(); ++r)
        m.row_mut(top.rows() + r) = bottom.row(r);
    return m;
}

}  // namespace

Subspace ker_del(const Bicomplex& a, Bidegree bd) { return kernel_of(a.del(bd)); }
Subspace ker_delbar(const Bicomplex& a, Bidegree bd) { return kernel_of(a.delbar(bd)); }
Subspace ker_del_delbar(const Bicomplex& a, Bidegree bd) { return kernel_of(stack(a.del(bd), a.delbar(bd))); }
Subspace ker_ddbar(const Bicomplex& a, Bidegree bd) { return kernel_of(a.ddbar_from(bd)); }

Subspace im_del(const Bicomplex& a, Bidegree bd)
{
    Bidegree src = bd - kDel;
    if (!src.valid())
        return Subspace(a.dim(bd));
    return column_span(a.del(src));
}

Subspace im_delbar(const Bicomplex& a, Bidegree bd)
{
    Bidegree src = bd - kDelbar;
    if (!src.valid())
        return Subspace(a.dim(bd));
    return column_span(a.delbar(src));
}

Subspace im_ddbar(const Bicomplex& a, Bidegree bd) { return column_span(a.ddbar_into(bd)); }

Subspace im_del_plus_delbar(const Bicomplex& a, Bidegree bd) { return sum(im_del(a, bd), im_delbar(a, bd)); }

int cohomology_limit(const Bicomplex& a, CohomologyKind kind)
{
    if (a.kind() == AlgebraKind::Finite)
        return a.top_degree();
    int D = a.top_degree();
    return kind == CohomologyKind::Aeppli ? D - 2 : D - 1;
}

std::optional<std::vector<Scalar>> CohomologySpace::coordinates(const Bicomplex& a, const Element& e) const
{
    if (kind == CohomologyKind::DeRham) {
        TotalSpace ts(a, total);
        for (const auto& [b, v] : e.parts())
            if (b.total() != total)
                return std::nullopt;
        return quotient.coordinates(ts.flatten(e));
    }
    for (const auto& [b, v] : e.parts())
        if (b != bd)
            return std::nullopt;
    return quotient.coordinates(e.at(bd));
}

CohomologySpace cohomology(const Bicomplex& a, CohomologyKind kind, Bidegree bd)
{
    if (kind == CohomologyKind::DeRham)
        return de_rham(a, bd.total());
    if (a.kind() == AlgebraKind::Free && bd.total() > cohomology_limit(a, kind))
        throw Error(ErrorKind::InsufficientTruncation,
                    std::string(cohomology_kind_name(kind)) + " cohomology at " + bd.to_string() +
                        " needs a truncation of at least " +
                        std::to_string(bd.total() + (kind == CohomologyKind::Aeppli ? 2 : 1)));
    Subspace z, b;
    switch (kind) {
    case CohomologyKind::BottChern:
        z = ker_del_delbar(a, bd);
        b = im_ddbar(a, bd);
        break;
    case CohomologyKind::Aeppli:
        z = ker_ddbar(a, bd);
        b = im_del_plus_delbar(a, bd);
        break;
    case CohomologyKind::Dolbeault:
        z = ker_delbar(a, bd);
        b = im_delbar(a, bd);
        break;
    case CohomologyKind::AntiDolbeault:
        z = ker_del(a, bd);
        b = im_del(a, bd);
        break;
    case CohomologyKind::DeRham:
        break;
    }
    CohomologySpace out{kind, bd, bd.total(), Quotient(z, b), {}};
    for (const auto& r : out.quotient.representatives())
        out.representatives.emplace_back(bd, r);
    return out;
}

CohomologySpace de_rham(const Bicomplex& a, int t)
{
    if (a.kind() == AlgebraKind::Free && t > cohomology_limit(a, CohomologyKind::DeRham))
        throw Error(ErrorKind::InsufficientTruncation,
                    "de Rham cohomology in degree " + std::to_string(t) + " needs a truncation of at least " +
                        std::to_string(t + 1));
    TotalSpace prev(a, t - 1), cur(a, t), next(a, t + 1);
    Subspace z = kernel_of(total_d(a, cur, next));
    Subspace b = t > 0 ? column_span(total_d(a, prev, cur)) : Subspace(cur.dim());
    CohomologySpace out{CohomologyKind::DeRham, {t, 0}, t, Quotient(z, b), {}};
    for (const auto& r : out.quotient.representatives())
        out.representatives.push_back(cur.unflatten(r));
    return out;
}

// Pairing

PairingReport pairing_check(const Bicomplex& a, int n)
{
    PairingReport rep;
    rep.n = n;
    auto fail = [&](Bidegree bd, std::string why, std::string witness) {
        if (rep.failure.empty()) {
            rep.failure = std::move(why);
            rep.failing = bd;
            rep.witness = std::move(witness);
        }
    };

    int limit = a.kind() == AlgebraKind::Free ? a.top_degree() - 2 : a.top_degree();
    if (a.kind() == AlgebraKind::Free && limit < 2 * n)
        throw Error(ErrorKind::InsufficientTruncation,
                    "pairing check for n = " + std::to_string(n) + " needs truncation >= " + std::to_string(2 * n + 2));
    for (int t = 0; t <= limit; ++t)
        for (int p = 0; p <= t; ++p) {
            Bidegree bd{p, t - p};
            if ((p <= n && t - p <= n) || a.dim(bd) == 0)
                continue;
            rep.vanishing_checked.push_back(bd);
            for (auto kind : {CohomologyKind::BottChern, CohomologyKind::Aeppli}) {
                auto h = cohomology(a, kind, bd);
                if (h.dim() != 0)
                    fail(bd, std::string(cohomology_kind_name(kind)) + " cohomology does not vanish outside [0,n]^2",
                         to_string(a, h.representatives[0]));
            }
        }

    Bidegree top{n, n};
    auto an = cohomology(a, CohomologyKind::Aeppli, top);
    if (an.dim() != 1) {
        fail(top, "H_A^{n,n} has dimension " + std::to_string(an.dim()) + ", expected 1",
             an.dim() ? to_string(a, an.representatives[1]) : "0");
        rep.holds = false;
        return rep;
    }
    rep.omega = an.representatives[0];

    for (int p = 0; p <= n; ++p)
        for (int q = 0; q <= n; ++q) {
            Bidegree bd{p, q};
            auto bc = cohomology(a, CohomologyKind::BottChern, bd);
            auto ae = cohomology(a, CohomologyKind::Aeppli, top - bd);
            PairingBlock blk{bd, bc.dim(), ae.dim(), {}, false};
            std::vector<std::vector<Scalar>> dense(bc.dim(), std::vector<Scalar>(ae.dim()));
            for (std::size_t i = 0; i < bc.dim(); ++i)
                for (std::size_t j = 0; j < ae.dim(); ++j) {
                    Element prod = multiply(a, bc.representatives[i], ae.representatives[j]);
                    if (prod.is_zero())
                        continue;
                    auto c = an.coordinates(a, prod);
                    if (!c)
                        throw Error(ErrorKind::InternalContradiction, "product of BC and A classes is not ∂∂̄-closed");
                    dense[i][j] = (*c)[0];
                }
            blk.matrix = dense;
            std::size_t rank = dense.empty() || dense[0].empty() ? 0 : rref(SparseMatrix::from_dense(dense)).rank();
            blk.perfect = blk.rows == blk.cols && rank == blk.rows;
            if (!blk.perfect) {
                std::string witness;
                if (rank < blk.rows) {
                    SparseMatrix m = dense.empty() || dense[0].empty() ? SparseMatrix(blk.rows, 0)
                                                                        : SparseMatrix::from_dense(dense);
                    auto left = kernel_basis(m.transpose());
                    Element w;
                    for (const auto& [i, c] : left.at(0).entries())
                        w.axpy(c, bc.representatives[i]);
                    witness = "bott-chern class " + to_string(a, w);
                } else {
                    SparseMatrix m = SparseMatrix::from_dense(dense);
                    auto right = kernel_basis(m);
                    Element w;
                    for (const auto& [j, c] : right.at(0).entries())
                        w.axpy(c, ae.representatives[j]);
                    witness = "aeppli class " + to_string(a, w);
                }
                fail(bd, "pairing H_BC^" + bd.to_string() + " x H_A^" + (top - bd).to_string() + " is not perfect",
                     witness);
            }
            rep.blocks.push_back(std::move(blk));
        }
    rep.holds = rep.failure.empty();
    return rep;
}

// Zigzags

std::string ZigzagShape::describe() const
{
    std::string s;
    switch (kind) {
    case Kind::Dot: s = "dot " + anchor.to_string(); break;
    case Kind::Square: s = "square " + anchor.to_string(); break;
    case Kind::Zigzag:
        s = "zigzag ";
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            if (k)
                s += word[k - 1] == 'd' ? " -del- " : " -delbar- ";
            s += nodes[k].to_string();
        }
        break;
    }
    if (multiplicity != 1)
        s += " x" + std::to_string(multiplicity);
    return s;
}

bool ZigzagDecomposition::only_dots_and_squares() const
{
    return std::none_of(shapes.begin(), shapes.end(), [](const ZigzagShape& s) { return s.kind == ZigzagShape::Kind::Zigzag; });
}

std::map<Bidegree, std::size_t> ZigzagDecomposition::dims() const
{
    std::map<Bidegree, std::size_t> out;
    for (const auto& s : shapes) {
        switch (s.kind) {
        case ZigzagShape::Kind::Dot: out[s.anchor] += s.multiplicity; break;
        case ZigzagShape::Kind::Square:
            for (Bidegree off : {Bidegree{0, 0}, kDel, kDelbar, kDdbar})
                out[s.anchor + off] += s.multiplicity;
            break;
        case ZigzagShape::Kind::Zigzag:
            for (Bidegree b : s.nodes)
                out[b] += s.multiplicity;
            break;
        }
    }
    return out;
}

namespace {

std::map<Bidegree, std::size_t> predicted(const ZigzagDecomposition& z, bool upper)
{
    std::map<Bidegree, std::size_t> out;
    for (const auto& s : z.shapes) {
        if (s.kind == ZigzagShape::Kind::Dot)
            out[s.anchor] += s.multiplicity;
        if (s.kind != ZigzagShape::Kind::Zigzag)
            continue;
        int lo = s.nodes[0].total(), hi = lo;
        for (Bidegree b : s.nodes) {
            lo = std::min(lo, b.total());
            hi = std::max(hi, b.total());
        }
        for (Bidegree b : s.nodes)
            if (b.total() == (upper ? hi : lo))
                out[b] += s.multiplicity;
    }
    return out;
}

// Interval multiplicities of the zigzag quiver
// T_0 <- S_0 -> T_1 <- S_1 -> ... <- S_k -> T_{k+1}
// (position 2p = T_p, 2p+1 = S_p) via ranks of lim -> colim.
struct StripQuiver {
    std::vector<std::size_t> dim;
    // arrows[l] : map between positions l and l+1, oriented from the S end.
    std::vector<SparseMatrix> arrows;

    bool is_source(std::size_t l) const { return l % 2 == 1; }

    std::size_t rank_lim_colim(std::size_t i, std::size_t j) const
    {
        std::vector<uint32_t> off(j - i + 2, 0);
        for (std::size_t l = i; l <= j; ++l)
            off[l - i + 1] = off[l - i] + static_cast<uint32_t>(dim[l]);
        std::size_t total = off.back();
        if (total == 0)
            return 0;
        // Constraint / relation vectors, one per (arrow, basis vector).
        std::vector<SparseVec> constraints;  // rows acting on ⊕V_l, lim = their common kernel
        std::vector<SparseVec> relations;    // colim = ⊕V_l / span(relations)
        for (std::size_t l = i; l < j; ++l) {
            std::size_t s = is_source(l) ? l : l + 1;
            std::size_t t = is_source(l) ? l + 1 : l;
            const SparseMatrix& f = arrows[l];  // dim[t] x dim[s]
            for (std::size_t r = 0; r < dim[t]; ++r) {
                SparseVec row;
                for (const auto& [c, v] : f.row(r).entries())
                    row.push_back(off[s - i] + c, v);
                row.axpy(-1, SparseVec::unit(off[t - i] + static_cast<uint32_t>(r)));
                constraints.push_back(std::move(row));
            }
            auto cols = f.columns();
            for (std::size_t c = 0; c < dim[s]; ++c) {
                SparseVec rel = SparseVec::unit(off[s - i] + static_cast<uint32_t>(c));
                for (const auto& [r, v] : cols[c].entries())
                    rel.axpy(-v, SparseVec::unit(off[t - i] + r));
                relations.push_back(std::move(rel));
            }
        }
        SparseMatrix cm(constraints.size(), total);
        for (std::size_t r = 0; r < constraints.size(); ++r)
            cm.row_mut(r) = constraints[r];
        std::vector<SparseVec> lim = constraints.empty() ? std::vector<SparseVec>{} : kernel_basis(cm);
        if (constraints.empty())
            for (uint32_t k = 0; k < total; ++k)
                lim.push_back(SparseVec::unit(k));
        Subspace rel = Subspace::span(total, relations);
        std::vector<SparseVec> images;
        for (const auto& x : lim) {
            SparseVec first;
            for (const auto& [k, v] : x.entries())
                if (k < off[1])
                    first.push_back(k, v);
            images.push_back(std::move(first));
        }
        return sum(rel, Subspace::span(total, images)).dim() - rel.dim();
    }
};

}  // namespace

std::map<Bidegree, std::size_t> ZigzagDecomposition::predicted_bc() const { return predicted(*this, true); }
std::map<Bidegree, std::size_t> ZigzagDecomposition::predicted_aeppli() const { return predicted(*this, false); }

ZigzagDecomposition zigzag_decompose(const Bicomplex& a)
{
    if (a.kind() != AlgebraKind::Finite)
        throw Error(ErrorKind::UnsupportedInput,
                    "zigzag decomposition needs a finite bicomplex; a truncated free algebra does not determine it");
    ZigzagDecomposition out;
    std::vector<ZigzagShape> dots, squares, zigzags;
    int top = a.top_degree();

    for (int t = 0; t <= top; ++t)
        for (Bidegree bd : a.slices(t)) {
            std::size_t r = rref(a.ddbar_from(bd)).rank();
            if (r)
                squares.push_back({ZigzagShape::Kind::Square, bd, {}, {}, r});
        }

    for (int k = 0; k <= top; ++k) {
        std::vector<CohomologySpace> S, T;
        for (int p = 0; p <= k; ++p)
            S.push_back(cohomology(a, CohomologyKind::Aeppli, {p, k - p}));
        for (int p = 0; p <= k + 1; ++p)
            T.push_back(cohomology(a, CohomologyKind::BottChern, {p, k + 1 - p}));

        StripQuiver qv;
        std::vector<Bidegree> where;
        for (int p = 0; p <= k + 1; ++p) {
            qv.dim.push_back(T[p].dim());
            where.push_back({p, k + 1 - p});
            if (p <= k) {
                qv.dim.push_back(S[p].dim());
                where.push_back({p, k - p});
            }
        }
        auto induced = [&](const CohomologySpace& src, const CohomologySpace& tgt, bool bar) {
            std::vector<SparseVec> cols;
            for (const auto& rep : src.representatives) {
                Element img = bar ? delbar(a, rep) : del(a, rep);
                auto c = tgt.coordinates(a, img);
                if (!c)
                    throw Error(ErrorKind::InternalContradiction, "induced map leaves the Bott-Chern cycles");
                SparseVec v;
                for (std::size_t i = 0; i < c->size(); ++i)
                    if (!(*c)[i].is_zero())
                        v.push_back(static_cast<uint32_t>(i), (*c)[i]);
                cols.push_back(std::move(v));
            }
            return SparseMatrix::from_columns(tgt.dim(), cols);
        };
        for (std::size_t l = 0; l + 1 < qv.dim.size(); ++l) {
            if (l % 2 == 0)  // T_p <- S_p : ∂̄
                qv.arrows.push_back(induced(S[l / 2], T[l / 2], true));
            else  // S_p -> T_{p+1} : ∂
                qv.arrows.push_back(induced(S[l / 2], T[l / 2 + 1], false));
        }

        std::size_t m = qv.dim.size();
        std::vector<std::vector<std::size_t>> N(m + 1, std::vector<std::size_t>(m + 1, 0));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i; j < m; ++j)
                N[i][j] = qv.rank_lim_colim(i, j);
        auto at = [&](long i, long j) -> long {
            if (i < 0 || j >= static_cast<long>(m) || i > j)
                return 0;
            return static_cast<long>(N[i][j]);
        };
        for (long i = 0; i < static_cast<long>(m); ++i)
            for (long j = i; j < static_cast<long>(m); ++j) {
                long mult = at(i, j) - at(i - 1, j) - at(i, j + 1) + at(i - 1, j + 1);
                if (mult < 0)
                    throw Error(ErrorKind::InternalContradiction, "negative interval multiplicity");
                if (mult == 0)
                    continue;
                if (i == j) {
                    if (qv.is_source(static_cast<std::size_t>(i)))
                        dots.push_back({ZigzagShape::Kind::Dot, where[i], {}, {}, static_cast<std::size_t>(mult)});
                    continue;
                }
                ZigzagShape z{ZigzagShape::Kind::Zigzag, where[i], {}, {}, static_cast<std::size_t>(mult)};
                for (long l = i; l <= j; ++l) {
                    z.nodes.push_back(where[l]);
                    if (l > i)
                        z.word += (l - 1) % 2 == 0 ? 'b' : 'd';
                }
                zigzags.push_back(std::move(z));
            }
    }

    auto by_anchor = [](const ZigzagShape& x, const ZigzagShape& y) { return x.anchor < y.anchor; };
    std::sort(dots.begin(), dots.end(), by_anchor);
    std::sort(squares.begin(), squares.end(), by_anchor);
    std::stable_sort(zigzags.begin(), zigzags.end(), [](const ZigzagShape& x, const ZigzagShape& y) {
        if (x.nodes.size() != y.nodes.size())
            return x.nodes.size() > y.nodes.size();
        if (x.anchor != y.anchor)
            return x.anchor < y.anchor;
        return x.word < y.word;
    });
    for (auto* v : {&dots, &squares, &zigzags})
        out.shapes.insert(out.shapes.end(), v->begin(), v->end());
    return out;
}

}  // namespace formality
