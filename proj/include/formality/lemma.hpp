#pragma once

#include "formality/cohomology.hpp"
#include "formality/subalgebra.hpp"

namespace formality {

/// d-exact, ∂- and ∂̄-closed elements of total degree t, in TotalSpace(a, t)
/// coordinates. Elements of mixed bidegree matter: in T <-∂̄- S -∂-> T' the
/// element ds is closed and exact but has no exact pure component.
Subspace exact_closed(const Bicomplex& a, int t);
/// Im ∂∂̄ in total degree t, in TotalSpace(a, t) coordinates.
Subspace ddbar_image(const Bicomplex& a, int t);

struct DdbarRow {
    enum class Status { Checked, VanishingBySd, ByDuality } status = Status::Checked;
    int total = 0;
    std::size_t exact_closed_dim = 0;  // dim of the tested subspace
    std::size_t defect = 0;            // dim of its image modulo Im ∂∂̄
    bool ok() const { return defect == 0; }
};

const char* ddbar_status_name(DdbarRow::Status s);

struct DdbarVerdict {
    std::optional<int> up_to;  // nullopt: global scope
    bool holds = false;
    /// False when degrees beyond the truncation were neither checked nor
    /// excluded by Serre duality ("holds up to truncation").
    bool complete = true;
    int checked_through = -1;  // highest total degree actually tested
    std::optional<int> failing;  // total degree of the first counterexample
    std::optional<Element> witness;
    std::vector<DdbarRow> rows;
    std::vector<std::string> notes;  // steps of a promotion argument
};

/// Highest total degree the checks test: the top degree for finite kind, D-2
/// for free kind. With an sd-target n the free kind needs D-2 >= 2n.
int ddbar_scope(const Bicomplex& a);

DdbarVerdict ddbar_check_global(const Bicomplex& a);
/// Free kind only: the d-exact closed elements of C(ΛV^{<=s}) must be ∂∂̄-exact in ΛV.
DdbarVerdict ddbar_check_up_to(const Bicomplex& a, int s);

struct IsoRow {
    Bidegree bd;
    std::size_t bc_dim = 0;
    std::size_t a_dim = 0;
    std::size_t rank = 0;
    bool iso() const { return bc_dim == a_dim && rank == bc_dim; }
};

/// Bijectivity of H_BC^{p,q} -> H_A^{p,q} for totals <= up_to (default: ddbar_scope).
std::vector<IsoRow> bc_to_a_iso_table(const Bicomplex& a, std::optional<int> up_to = std::nullopt);

/// Global verdict through the Serre duality argument. Requires pairing_check(n)
/// and the lemma up to degree n-1; cross-checks the direct global verdict.
DdbarVerdict sd_promotion_check(const Bicomplex& a, int n);

}  // namespace formality
