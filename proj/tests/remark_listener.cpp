// Tallies the Remark implication over every certificate verified in the unit
// tests; a single violation fails the run.

#include "formality/formality.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>

namespace {

class RemarkListener : public Catch::EventListenerBase {
public:
    using Catch::EventListenerBase::EventListenerBase;

    void testRunEnded(const Catch::TestRunStats&) override
    {
        auto tally = formality::remark_tally();
        if (tally.violations == 0)
            return;
        std::fprintf(stderr, "Remark implication violated in %zu of %zu slices\n", tally.violations, tally.checks);
        std::fflush(stderr);
        std::_Exit(1);
    }
};

}  // namespace

CATCH_REGISTER_LISTENER(RemarkListener)
