#pragma once

#include <compare>
#include <stdexcept>
#include <string>

namespace formality {

struct Bidegree {
    int p = 0;
    int q = 0;

    int total() const { return p + q; }
    int parity() const { return ((p + q) % 2 + 2) % 2; }
    bool valid() const { return p >= 0 && q >= 0; }

    friend Bidegree operator+(Bidegree a, Bidegree b) { return {a.p + b.p, a.q + b.q}; }
    friend Bidegree operator-(Bidegree a, Bidegree b) { return {a.p - b.p, a.q - b.q}; }
    friend auto operator<=>(const Bidegree&, const Bidegree&) = default;

    std::string to_string() const { return "(" + std::to_string(p) + "," + std::to_string(q) + ")"; }
};

inline constexpr Bidegree kDel{1, 0};
inline constexpr Bidegree kDelbar{0, 1};
inline constexpr Bidegree kDdbar{1, 1};

enum class ErrorKind {
    Syntax,
    DuplicateName,
    UnknownReference,
    UnknownCorpusEntry,
    NonSquareZero,
    LeibnizViolation,
    GradingViolation,
    NonNilpotentOrder,
    ProductAxiomViolation,
    TruncationOverflow,
    InsufficientTruncation,
    NoSolution,
    DdbarWitnessMissing,
    SplittingObstructed,
    MorphismViolation,
    HypothesesUnmet,
    InternalContradiction,
    PairingSingular,
    PreconditionFailed,
    PromotionObstructed,
    WidthViolated,
    SpecialBranchInconsistent,
    TargetNotDdbar,
    TruncationTooSmall,
    RestrictionContractViolated,
    UnsupportedInput,
};

const char* error_kind_name(ErrorKind k);

/// Every library failure carries a kind and, where one exists, a concrete witness.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, std::string witness = {})
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message), kind_(kind),
          witness_(std::move(witness))
    {
    }

    ErrorKind kind() const { return kind_; }
    const std::string& witness() const { return witness_; }

private:
    ErrorKind kind_;
    std::string witness_;
};

}  // namespace formality
