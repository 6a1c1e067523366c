#pragma once

#include "formality/lemma.hpp"

#include <atomic>

namespace formality {

/// A generator of a split basis: value = linear - subtrahend, where `linear`
/// is a combination of original generators and `subtrahend` a correction in
/// the sub-cbba generated by lower generators (b_y, a_x or ψ_i).
struct SplitGenerator {
    Element linear;
    Element subtrahend;
    Element value() const { return linear - subtrahend; }
};

struct IdealWitness {
    enum class Kind { DdbarPrimitive, DelDelbarSplit } kind;
    Bidegree bd;
    Element element;    // basis vector of a closed slice of the ideal
    Element primitive;  // element = ∂∂̄ primitive
    Element alpha;      // element = ∂ alpha + ∂̄ beta
    Element beta;
};

struct SplittingCertificate {
    std::string algebra;  // name of the algebra it was produced for
    int s = 0;
    bool global_to_2n = false;  // produced by promote (s = 2n)
    std::map<Bidegree, std::vector<SplitGenerator>> c_basis;
    std::map<Bidegree, std::vector<SplitGenerator>> n_basis;
    std::vector<IdealWitness> witnesses;
    /// Highest total degree whose ideal slices were tested.
    int ideal_checked_through = -1;

    std::vector<Element> n_elements() const;
    std::vector<Element> all_elements() const;
};

/// d-closure of the split generators of total degree <= max_degree, as
/// building elements of C(ΛV^{<=s}).
std::vector<Element> split_building(const Bicomplex& a, const SplittingCertificate& cert, int max_degree);

/// Recomputes cert.witnesses from the ideal conditions at totals <= scope;
/// throws on_failure with the offending element when a condition fails.
void attach_ideal_witnesses(const FreeCbba& a, SplittingCertificate& cert, int scope, ErrorKind on_failure);

// Split sub-steps

/// ker(V^k -> C(ΛV^{<=k}) / d C(ΛV^{<=k-1})) in generators_of_total(k) coordinates.
Subspace ker_rho(const FreeCbba& a, int k);
/// Same, restricted to the generators of one bidegree (generators_of(bd) coordinates).
Subspace ker_rho(const FreeCbba& a, Bidegree bd);

/// Pure-bidegree b_y with ∂b_y = ∂y and ∂̄b_y = ∂̄y, b_y in C(ΛV^{<=|y|-1}).
/// Throws NoSolution when dy is not in d C(ΛV^{<=|y|-1}), DdbarWitnessMissing
/// when a ∂∂̄-primitive needed by the purification does not exist.
Element purify_primitive(const FreeCbba& a, const Element& y);

/// Ideal I = (N + ∂N + ∂̄N + ∂∂̄N) · C at bd, C given by building elements.
Subspace split_ideal(const Bicomplex& a, const std::vector<Element>& n_gens, const SliceFamily& c, Bidegree bd);

SplittingCertificate split_search(const FreeCbba& a, int s);

struct VerifyReport {
    bool passed = false;
    std::vector<std::string> failures;
    std::optional<Bidegree> failing;
    std::optional<Element> witness;
    std::size_t bidegrees_checked = 0;
    std::size_t witnesses_checked = 0;
    bool lemma_holds = false;
    /// Slices where the Aeppli-type condition and the lemma held; the
    /// Bott-Chern-type condition must then hold too.
    std::size_t remark_checks = 0;
    std::size_t remark_violations = 0;
};

/// Independent re-check of a certificate at scope s (generator degrees <= s,
/// ideal slices up to D-2).
VerifyReport split_verify(const FreeCbba& a, const SplittingCertificate& cert, int scope);

/// Process-wide count of Remark checks and violations across every split_verify call.
struct RemarkTally {
    std::size_t checks = 0;
    std::size_t violations = 0;
};
RemarkTally remark_tally();

// ψ morphism

struct PsiMorphism {
    int s = 0;
    /// ψ of each generator of total degree <= s: a closed representative
    /// (zero for generators mapped to zero).
    std::map<uint32_t, Element> generator_image;
    std::size_t spanning_elements = 0;
    std::size_t relations_checked = 0;
    std::size_t differential_checks = 0;
    /// Per bidegree: induced map on H_BC / H_A of C(ΛV^{<=s}) into H(ΛV).
    struct InducedRow {
        Bidegree bd;
        std::size_t bc_source = 0, bc_rank = 0, bc_target = 0;
        std::size_t a_source = 0, a_rank = 0, a_target = 0;
        bool a_computed = false;
    };
    std::vector<InducedRow> induced;
};

/// ψ(ĉ) = [ĉ]_BC, ψ(n̂) = ψ(∂n̂) = ψ(∂̄n̂) = ψ(∂∂̄n̂) = 0, extended
/// multiplicatively. Throws MorphismViolation with the offending element.
PsiMorphism build_psi(const FreeCbba& a, const SplittingCertificate& cert, int s);

// s-strong formality

struct SStrongResult {
    bool holds = false;
    /// True when the failure is intrinsic (the ∂∂̄-Lemma up to s fails);
    /// false for "not certified" by the greedy splitting.
    bool refuted = false;
    std::string failure;
    std::optional<Element> witness;
    std::optional<DdbarVerdict> lemma;
    std::optional<SplittingCertificate> certificate;
};

SStrongResult s_strong_check(const FreeCbba& a, int s);

// Promotion

/// State of the promotion induction: split generators processed so far.
struct PromotionContext {
    std::vector<Element> c_gens;  // Ĉ_{i-1}
    std::vector<Element> n_gens;  // N̂_{i-1}
    int max_total = 0;

    std::vector<Element> building(const Bicomplex& a) const;
    SliceFamily algebra(const Bicomplex& a) const;  // C(ΛV̂_{i-1})
};

struct EtaNormalForm {
    Element eta0;
    Element tau;
    Element alpha;
    Element beta;
    std::string case_label;  // "1.1", "1.2", "1.3", "2.1", "2.2"
    Scalar lambda;           // coefficient of x_i^2 (must vanish)
};

/// η = η₀ + τ·x_i + ∂α + ∂̄β with η₀ in I_{i-1}, τ closed in C(ΛV_{i-1}).
EtaNormalForm rewrite_eta(const FreeCbba& a, const Element& eta, const Element& x_i, const PromotionContext& ctx,
                          int n);

struct Adjustment {
    Element psi;                  // ψ_i (closed, in C(ΛV_{i-1}))
    std::vector<Scalar> lambdas;  // λ_j before the adjustment
};

/// ψ_i with [z_j]_A·[ψ_i]_BC = λ_j[ω]_A for a basis z_j of H_A^{(n,n)-|x_i|}.
Adjustment adjust_generator(const FreeCbba& a, const Element& x_i, const PromotionContext& ctx, int n);

struct PromotionLog {
    struct Step {
        uint32_t generator;
        bool in_ker_rho;
        Element subtrahend;
    };
    std::vector<Step> steps;
    std::size_t eta_rewrites = 0;
    std::size_t snapshot_checks = 0;
};

SplittingCertificate promote(const FreeCbba& a, int n, PromotionLog* log = nullptr);

}  // namespace formality
