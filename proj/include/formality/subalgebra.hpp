#pragma once

#include "formality/free_cbba.hpp"

namespace formality {

/// A family of subspaces, one per bidegree, e.g. a sub-cbba.
class SliceFamily {
public:
    SliceFamily() = default;
    explicit SliceFamily(int max_total) : max_total_(max_total) {}

    int max_total() const { return max_total_; }
    /// Subspace at bd; the zero subspace of the slice when nothing is stored.
    Subspace at(const Bicomplex& a, Bidegree bd) const;
    void set(Bidegree bd, Subspace s) { slices_[bd] = std::move(s); }
    const std::map<Bidegree, Subspace>& slices() const { return slices_; }
    friend bool operator==(const SliceFamily&, const SliceFamily&) = default;

private:
    int max_total_ = -1;
    std::map<Bidegree, Subspace> slices_;
};

/// g, ∂g, ∂̄g, ∂∂̄g for each g (zero and out-of-range entries dropped).
std::vector<Element> differential_closure(const Bicomplex& a, const std::vector<Element>& gens);

/// The sub-cbba generated by the generators of total degree <= s and their
/// ∂, ∂̄, ∂∂̄ images, up to total degree max_total (default: the truncation).
SliceFamily generated_sub_cbba(const FreeCbba& a, int s, std::optional<int> max_total = std::nullopt);

/// Same construction for an arbitrary list of homogeneous building elements.
SliceFamily generated_subalgebra(const Bicomplex& a, const std::vector<Element>& building, int max_total);

/// Span at bd of {g*m}: g over gens (with their differentials when closure is
/// set), m over the ambient family, or over the whole slice when ambient is null.
Subspace ideal_span(const Bicomplex& a, const std::vector<Element>& gens, Bidegree bd, const SliceFamily* ambient,
                    bool closure);

}  // namespace formality
