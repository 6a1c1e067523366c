#pragma once

#include "formality/report.hpp"

namespace formality {

/// "corpus:NAME" or a presentation file path.
Presentation load_presentation(const std::string& ref);

/// Central-model SPEC: "corpus:central-n3-generic" / "corpus:central-n3-special"
/// or an object
///   {"name": "...", "n": 3, "primitives": [{"bidegree": "(2,1)", "dim": 1}, ...],
///    "special": {"m": 1, "a": "1", "b": "0"}}
HodgeInput hodge_input_from_json(const Json& j);

struct LefschetzSpec {
    RestrictionInput input;
    int truncation = 0;
};

/// Lefschetz SPEC:
///   {"n": 1, "truncation": 4, "b": "corpus:cp2-ring", "b_truncation": 6,
///    "a": "corpus:cp1-ring", "restriction": {"u": "u", "x1": "x1", "x2": "0"}}
/// B's model is completed from nothing against B's ring (b_truncation
/// defaults to 2n+2, truncation to 2n+2); every basis symbol of B needs an image.
/// Relative file references for a and b resolve against base_dir.
LefschetzSpec lefschetz_spec_from_json(const Json& j, const std::string& base_dir = "");

/// Reads a JSON document, or a bare "corpus:NAME" string, from a file.
Json read_json_file(const std::string& path);

}  // namespace formality
