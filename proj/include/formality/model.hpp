#pragma once

#include "formality/finite_cbba.hpp"
#include "formality/formality.hpp"

namespace formality {

/// Free model together with a cbba morphism into a finite target, stored as
/// the image of every generator.
struct ModelMap {
    std::shared_ptr<const FreeCbba> model;
    std::shared_ptr<const FiniteCbba> target;
    std::vector<Element> images;  // indexed by generator
};

/// Image of a model element under the generator images.
Element evaluate(const ModelMap& f, const Element& e);

/// A free-kind element written as a presentation polynomial.
Poly element_to_poly(const FreeCbba& a, const Element& e);

struct DimRow {
    Bidegree bd;
    std::size_t model_bc = 0;
    std::size_t target_bc = 0;
    std::size_t model_a = 0;
    std::size_t target_a = 0;
    std::size_t bc_rank = 0;  // rank of the induced map on H_BC
    bool matches() const { return model_bc == target_bc && model_a == target_a && bc_rank == target_bc; }
};

struct CompletionReport {
    int truncation = 0;
    std::vector<DimRow> rows;  // totals <= truncation - 2
    std::vector<std::string> closed_added;
    std::vector<std::string> triples_added;  // the r of each (r, ∂r, ∂̄r)
    std::vector<std::string> gadgets_added;  // halves s and t of each Aeppli gadget
    bool dims_match() const;
};

struct CompletedModel {
    ModelMap map;
    CompletionReport report;
};

/// Extends partial (free kind, images[g] = image of generator g in target)
/// degree by degree up to total degree D: triples (r, ∂r, ∂̄r) with ∂∂̄r = k
/// kill Bott-Chern kernel classes k, gadgets s (sp, sq) and t (tp) with
/// m = ∂s + ∂̄t kill Aeppli kernel classes m, closed generators fill the cokernel.
/// New closed generators are named after the target basis element when the
/// chosen representative is one, triples r, r2, ... with suffixes p (∂) and q (∂̄).
CompletedModel complete_model(const Presentation& partial, const std::vector<Element>& images,
                              std::shared_ptr<const FiniteCbba> target, int D);

/// Splitting of all generators of total <= s: closed ones to C, the others
/// to N, with ideal witnesses; throws InternalContradiction unless it verifies.
SplittingCertificate low_degree_certificate(const FreeCbba& a, int s);

/// Cohomology of a compact Kähler-type manifold described by its Hodge
/// primitives: x of bidegree (1,1), primitive classes p of degree k with
/// x^j p != 0 exactly for j <= n - k, and p·p' = x^k for Serre-paired
/// primitives. The special branch adds η of bidegree (m,m) with
/// η² = a·x^{2m} + b·x^m·η (n = 4m - 1).
struct HodgeInput {
    std::string name = "central";
    int n = 0;
    std::map<Bidegree, int> primitive_dims;
    struct Special {
        int m = 1;
        Scalar a{1};
        Scalar b{0};
    };
    std::optional<Special> special;
};

/// Finite-kind presentation of the cohomology ring (zero differentials).
Presentation hodge_ring(const HodgeInput& h);

struct BuiltModel {
    CompletedModel completed;
    SplittingCertificate certificate;  // s = n - 1
};

/// Λ(x, primitives[, η, ξ]) completed to truncation 2n+2, with the splitting
/// C = closed generators, N = <ξ> (special branch) in degrees <= n - 1.
BuiltModel central_model(const HodgeInput& h);

struct RelationsReport {
    bool holds = true;
    std::optional<int> failing_degree;
    std::optional<Bidegree> failing_bd;
    std::size_t kernel_dim = 0;  // at the failing bidegree
};

/// Injectivity of Sym(H_BC^{>=1}) -> H_BC in every total degree k < n + 2.
RelationsReport relations_injectivity_check(std::shared_ptr<const FiniteCbba> h, int n);

/// Model of a ring without relations below n + 2: completion from nothing to
/// truncation 2n+2 with the all-closed splitting in degrees <= n - 1.
BuiltModel relations_model(std::shared_ptr<const FiniteCbba> h, int n);

struct RestrictionInput {
    int n = 0;
    CompletedModel b_model;  // model of B mapping into B's cohomology ring
    std::shared_ptr<const FiniteCbba> a_ring;
    /// Image in A of every basis element of B's ring (a ring map on classes).
    std::vector<Element> restriction;
    std::optional<SplittingCertificate> b_certificate;  // s = n - 1; computed when absent
};

struct LefschetzResult {
    CompletedModel completed;
    SplittingCertificate certificate;  // from promote, s = 2n
    std::vector<std::string> h_generators;  // closed degree-n generators for the cokernel
    std::vector<std::string> k_generators;  // r of the triples killing K in degree n+1
    std::size_t snapshot_checks = 0;
};

LefschetzResult lefschetz_extend(const RestrictionInput& in, int D);

}  // namespace formality
