#include "formality/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace formality {

SparseVec SparseVec::unit(uint32_t i, Scalar v)
{
    SparseVec out;
    if (!v.is_zero())
        out.entries_.emplace_back(i, std::move(v));
    return out;
}

SparseVec SparseVec::from_dense(std::span<const Scalar> dense)
{
    SparseVec out;
    for (std::size_t i = 0; i < dense.size(); ++i)
        if (!dense[i].is_zero())
            out.entries_.emplace_back(static_cast<uint32_t>(i), dense[i]);
    return out;
}

const Scalar* SparseVec::find(uint32_t i) const
{
    auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                               [](const Entry& e, uint32_t k) { return e.first < k; });
    if (it == entries_.end() || it->first != i)
        return nullptr;
    return &it->second;
}

Scalar SparseVec::at(uint32_t i) const
{
    const Scalar* s = find(i);
    return s ? *s : Scalar();
}

void SparseVec::push_back(uint32_t i, Scalar v)
{
    if (!entries_.empty() && entries_.back().first >= i)
        throw std::logic_error("SparseVec::push_back out of order");
    if (!v.is_zero())
        entries_.emplace_back(i, std::move(v));
}

void SparseVec::set(uint32_t i, Scalar v)
{
    auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                               [](const Entry& e, uint32_t k) { return e.first < k; });
    if (it != entries_.end() && it->first == i) {
        if (v.is_zero())
            entries_.erase(it);
        else
            it->second = std::move(v);
    } else if (!v.is_zero()) {
        entries_.emplace(it, i, std::move(v));
    }
}

void SparseVec::axpy(const Scalar& a, const SparseVec& x)
{
    if (a.is_zero() || x.empty())
        return;
    std::vector<Entry> out;
    out.reserve(entries_.size() + x.entries_.size());
    auto i = entries_.begin();
    auto j = x.entries_.begin();
    while (i != entries_.end() || j != x.entries_.end()) {
        if (j == x.entries_.end() || (i != entries_.end() && i->first < j->first)) {
            out.push_back(std::move(*i));
            ++i;
        } else if (i == entries_.end() || j->first < i->first) {
            out.emplace_back(j->first, a * j->second);
            ++j;
        } else {
            Scalar s = std::move(i->second);
            s += a * j->second;
            if (!s.is_zero())
                out.emplace_back(i->first, std::move(s));
            ++i;
            ++j;
        }
    }
    entries_ = std::move(out);
}

void SparseVec::scale(const Scalar& a)
{
    if (a.is_zero()) {
        entries_.clear();
        return;
    }
    for (auto& e : entries_)
        e.second *= a;
}

SparseVec SparseVec::scaled(const Scalar& a) const
{
    SparseVec out = *this;
    out.scale(a);
    return out;
}

SparseMatrix SparseMatrix::identity(std::size_t n)
{
    SparseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.data_[i] = SparseVec::unit(static_cast<uint32_t>(i));
    return m;
}

SparseMatrix SparseMatrix::from_dense(const std::vector<std::vector<Scalar>>& rows)
{
    std::size_t cols = rows.empty() ? 0 : rows.front().size();
    SparseMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols)
            throw std::invalid_argument("ragged dense matrix");
        m.data_[r] = SparseVec::from_dense(rows[r]);
    }
    return m;
}

SparseMatrix SparseMatrix::from_columns(std::size_t rows, const std::vector<SparseVec>& cols)
{
    SparseMatrix m(rows, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (cols[c].extent() > rows)
            throw std::invalid_argument("column entry out of range");
        for (const auto& [r, v] : cols[c].entries())
            m.data_[r].push_back(static_cast<uint32_t>(c), v);
    }
    return m;
}

void SparseMatrix::set(std::size_t r, std::size_t c, Scalar v)
{
    if (r >= rows_ || c >= cols_)
        throw std::out_of_range("SparseMatrix::set");
    data_[r].set(static_cast<uint32_t>(c), std::move(v));
}

SparseMatrix SparseMatrix::transpose() const
{
    SparseMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (const auto& [c, v] : data_[r].entries())
            t.data_[c].push_back(static_cast<uint32_t>(r), v);
    return t;
}

SparseVec SparseMatrix::apply(const SparseVec& x) const
{
    if (x.extent() > cols_)
        throw std::invalid_argument("SparseMatrix::apply dimension mismatch");
    SparseVec y;
    for (std::size_t r = 0; r < rows_; ++r) {
        Scalar acc;
        const auto& row = data_[r].entries();
        auto i = row.begin();
        auto j = x.entries().begin();
        while (i != row.end() && j != x.entries().end()) {
            if (i->first < j->first)
                ++i;
            else if (j->first < i->first)
                ++j;
            else {
                acc += i->second * j->second;
                ++i;
                ++j;
            }
        }
        y.push_back(static_cast<uint32_t>(r), std::move(acc));
    }
    return y;
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& o) const
{
    if (cols_ != o.rows_)
        throw std::invalid_argument("SparseMatrix product dimension mismatch");
    SparseMatrix out(rows_, o.cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (const auto& [k, v] : data_[r].entries())
            out.data_[r].axpy(v, o.data_[k]);
    return out;
}

bool SparseMatrix::is_zero() const
{
    return std::all_of(data_.begin(), data_.end(), [](const SparseVec& v) { return v.empty(); });
}

std::optional<std::size_t> Echelon::row_of_pivot(uint32_t col) const
{
    auto it = std::lower_bound(pivots_.begin(), pivots_.end(), col);
    if (it == pivots_.end() || *it != col)
        return std::nullopt;
    return static_cast<std::size_t>(it - pivots_.begin());
}

SparseVec Echelon::reduce(const SparseVec& v, SparseVec* comb) const
{
    // Rows are fully reduced, so subtracting a row never touches another pivot
    // column: one pass over the original support suffices.
    SparseVec residual = v;
    if (comb)
        *comb = SparseVec();
    for (const auto& [col, val] : v.entries()) {
        auto r = row_of_pivot(col);
        if (!r)
            continue;
        residual.axpy(-val, rows_[*r]);
        if (comb && track_)
            comb->axpy(val, combs_[*r]);
    }
    return residual;
}

bool Echelon::insert(const SparseVec& v)
{
    if (v.extent() > ambient_)
        throw std::invalid_argument("Echelon::insert vector outside ambient space");
    std::size_t index = inserted_++;
    SparseVec comb;
    SparseVec r = reduce(v, track_ ? &comb : nullptr);
    if (track_)
        comb = SparseVec::unit(static_cast<uint32_t>(index)) - comb;
    if (r.empty()) {
        if (track_)
            relations_.push_back(std::move(comb));
        return false;
    }
    uint32_t p = r.leading();
    Scalar inv = r.entries().front().second.inverse();
    r.scale(inv);
    if (track_)
        comb.scale(inv);
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        const Scalar* e = rows_[k].find(p);
        if (!e)
            continue;
        Scalar f = *e;
        rows_[k].axpy(-f, r);
        if (track_)
            combs_[k].axpy(-f, comb);
    }
    auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), p) - pivots_.begin();
    pivots_.insert(pivots_.begin() + pos, p);
    rows_.insert(rows_.begin() + pos, std::move(r));
    if (track_)
        combs_.insert(combs_.begin() + pos, std::move(comb));
    return true;
}

std::optional<SparseVec> Echelon::express(const SparseVec& v) const
{
    if (!track_)
        throw std::logic_error("Echelon::express requires tracking");
    SparseVec comb;
    if (!reduce(v, &comb).empty())
        return std::nullopt;
    return comb;
}

RrefResult rref(const SparseMatrix& m)
{
    Echelon e(m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        e.insert(m.row(r));
    RrefResult out{SparseMatrix(m.rows(), m.cols()), {}};
    for (std::size_t k = 0; k < e.rank(); ++k) {
        out.rref.row_mut(k) = e.rows()[k];
        out.pivots.push_back(e.pivots()[k]);
    }
    return out;
}

std::optional<SparseVec> solve(const SparseMatrix& m, const SparseVec& b)
{
    if (b.extent() > m.rows())
        throw std::invalid_argument("solve: right-hand side dimension mismatch");
    // Columns inserted in order: independent ones are exactly the pivot
    // columns of rref(m), so the tracked combination has free variables zero.
    Echelon e(m.rows(), true);
    for (const auto& col : m.columns())
        e.insert(col);
    return e.express(b);
}

std::vector<SparseVec> kernel_basis(const SparseMatrix& m)
{
    RrefResult r = rref(m);
    std::vector<SparseVec> out;
    std::size_t next = 0;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        if (next < r.pivots.size() && r.pivots[next] == c) {
            ++next;
            continue;
        }
        SparseVec v;
        std::vector<std::pair<uint32_t, Scalar>> tmp;
        for (std::size_t k = 0; k < r.pivots.size(); ++k) {
            Scalar a = r.rref.at(k, c);
            if (!a.is_zero())
                tmp.emplace_back(static_cast<uint32_t>(r.pivots[k]), -a);
        }
        tmp.emplace_back(static_cast<uint32_t>(c), Scalar(1));
        std::sort(tmp.begin(), tmp.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        for (auto& [i, s] : tmp)
            v.push_back(i, std::move(s));
        out.push_back(std::move(v));
    }
    return Subspace::span(m.cols(), out).basis();
}

Subspace Subspace::span(std::size_t ambient, std::span<const SparseVec> vectors)
{
    Echelon e(ambient);
    for (const auto& v : vectors)
        e.insert(v);
    return from_echelon(e);
}

Subspace Subspace::full(std::size_t ambient)
{
    Subspace s(ambient);
    for (std::size_t i = 0; i < ambient; ++i) {
        s.basis_.push_back(SparseVec::unit(static_cast<uint32_t>(i)));
        s.pivots_.push_back(static_cast<uint32_t>(i));
    }
    return s;
}

Subspace Subspace::from_echelon(const Echelon& e)
{
    Subspace s(e.ambient());
    s.basis_ = e.rows();
    s.pivots_ = e.pivots();
    return s;
}

SparseVec Subspace::reduce(const SparseVec& v) const
{
    SparseVec residual = v;
    for (const auto& [col, val] : v.entries()) {
        auto it = std::lower_bound(pivots_.begin(), pivots_.end(), col);
        if (it == pivots_.end() || *it != col)
            continue;
        residual.axpy(-val, basis_[it - pivots_.begin()]);
    }
    return residual;
}

bool Subspace::contains(const Subspace& other) const
{
    return std::all_of(other.basis_.begin(), other.basis_.end(), [&](const SparseVec& v) { return contains(v); });
}

static void require_same_ambient(const Subspace& a, const Subspace& b)
{
    if (a.ambient() != b.ambient())
        throw std::invalid_argument("subspace ambient dimension mismatch");
}

Subspace sum(const Subspace& a, const Subspace& b)
{
    require_same_ambient(a, b);
    Echelon e(a.ambient());
    for (const auto& v : a.basis())
        e.insert(v);
    for (const auto& v : b.basis())
        e.insert(v);
    return Subspace::from_echelon(e);
}

Subspace intersect(const Subspace& a, const Subspace& b)
{
    require_same_ambient(a, b);
    const auto n = static_cast<uint32_t>(a.ambient());
    if (a.is_zero() || b.is_zero())
        return Subspace(n);
    // Rows (u | u) for u in a and (v | 0) for v in b; rows of the echelon form
    // whose pivot lies in the right half have zero left half and span a ∩ b.
    auto doubled = [n](const SparseVec& v) {
        SparseVec out = v;
        for (const auto& [i, s] : v.entries())
            out.push_back(i + n, s);
        return out;
    };
    Echelon e(2 * std::size_t{n});
    for (const auto& u : a.basis())
        e.insert(doubled(u));
    for (const auto& v : b.basis())
        e.insert(v);
    std::vector<SparseVec> result;
    for (std::size_t k = 0; k < e.rank(); ++k) {
        if (e.pivots()[k] < n)
            continue;
        SparseVec right;
        for (const auto& [i, s] : e.rows()[k].entries())
            right.push_back(i - n, s);
        result.push_back(std::move(right));
    }
    return Subspace::span(n, result);
}

std::vector<SparseVec> quotient_basis(const Subspace& a, const Subspace& b)
{
    require_same_ambient(a, b);
    Echelon e(a.ambient());
    for (const auto& v : b.basis())
        e.insert(v);
    std::vector<SparseVec> reps;
    for (const auto& v : a.basis())
        if (e.insert(v))
            reps.push_back(v);
    return reps;
}

Quotient::Quotient(const Subspace& cycles, const Subspace& boundaries)
    : boundaries_(boundaries), echelon_(cycles.ambient(), true)
{
    reps_ = quotient_basis(cycles, boundaries);
    for (const auto& v : boundaries.basis())
        echelon_.insert(v);
    for (const auto& v : reps_)
        echelon_.insert(v);
}

std::optional<std::vector<Scalar>> Quotient::coordinates(const SparseVec& v) const
{
    auto comb = echelon_.express(v);
    if (!comb)
        return std::nullopt;
    std::vector<Scalar> out(reps_.size());
    const auto offset = static_cast<uint32_t>(boundaries_.dim());
    for (const auto& [i, s] : comb->entries())
        if (i >= offset)
            out[i - offset] = s;
    return out;
}

}  // namespace formality
