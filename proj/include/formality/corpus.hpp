#pragma once

#include "formality/model.hpp"

#include <functional>

namespace formality {

struct CorpusEntry {
    std::string name;
    std::string summary;
    std::function<Presentation()> presentation;  // built models are computed on demand
};

/// Built-in examples in a fixed order.
const std::vector<CorpusEntry>& corpus();

/// Presentation of a named entry; UnknownCorpusEntry otherwise.
Presentation corpus_presentation(const std::string& name);

/// Hodge data behind central-n3-generic (special = false) and central-n3-special.
HodgeInput central_n3_input(bool special);

}  // namespace formality
