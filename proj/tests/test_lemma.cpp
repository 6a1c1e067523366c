#include "formality/lemma.hpp"
#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace test_support;

namespace {

const char* kIwasawa = R"(
name iwasawa-style
kind free
truncation 5
generator a bidegree (1,0)
generator b bidegree (1,0)
generator c bidegree (1,0)
generator abar bidegree (0,1)
generator bbar bidegree (0,1)
generator cbar bidegree (0,1)
del c = -1*a*b
delbar cbar = -1*abar*bbar
)";

std::string with_truncation(const char* text, int d)
{
    auto p = parse_presentation(text);
    p.truncation = d;
    return serialize(p);
}

bool iso_everywhere(const std::vector<IsoRow>& rows)
{
    return std::all_of(rows.begin(), rows.end(), [](const IsoRow& r) { return r.iso(); });
}

}  // namespace

TEST_CASE("global lemma on the basic shapes", "[lemma]")
{
    CHECK(ddbar_check_global(*algebra(kDot)).holds);
    CHECK(ddbar_check_global(*algebra(kSquare)).holds);

    auto a = algebra(kZigzag2);
    auto v = ddbar_check_global(*a);
    CHECK_FALSE(v.holds);
    REQUIRE(v.failing);
    CHECK(*v.failing == 2);
    REQUIRE(v.witness);
    CHECK(to_string(*a, *v.witness) == "b");
    // The witness is d-exact, ∂- and ∂̄-closed, and not ∂∂̄-exact.
    CHECK(del(*a, *v.witness).is_zero());
    CHECK(delbar(*a, *v.witness).is_zero());
    TotalSpace ts(*a, 2);
    CHECK(exact_closed(*a, 2).contains(ts.flatten(*v.witness)));
    CHECK_FALSE(ddbar_image(*a, 2).contains(ts.flatten(*v.witness)));
}

TEST_CASE("global lemma sees counterexamples of mixed bidegree", "[lemma]")
{
    // T_0 <-∂̄- s -∂-> T_1: ds = t0 + t1 is closed and exact, no pure part is.
    auto a = algebra(R"(
kind finite
basis s bidegree (0,1)
basis t0 bidegree (0,2)
basis t1 bidegree (1,1)
delbar s = t0
del s = t1
)");
    auto v = ddbar_check_global(*a);
    CHECK_FALSE(v.holds);
    REQUIRE(v.witness);
    CHECK(*v.witness == d(*a, Element::basis({0, 1}, 0)));
    CHECK_FALSE(zigzag_decompose(*a).only_dots_and_squares());
}

TEST_CASE("BC to A iso table on the basic shapes", "[lemma]")
{
    CHECK(iso_everywhere(bc_to_a_iso_table(*algebra(kDot))));
    CHECK(iso_everywhere(bc_to_a_iso_table(*algebra(kSquare))));
    auto rows = bc_to_a_iso_table(*algebra(kZigzag2));
    for (const auto& r : rows)
        CHECK(r.iso() == (r.bd != Bidegree{1, 0} && r.bd != Bidegree{1, 1}));
}

TEST_CASE("lemma up to degree s", "[lemma]")
{
    auto cp1 = algebra(with_truncation(kCp1Model, 6));
    CHECK(ddbar_check_up_to(*cp1, 1).holds);
    auto v = ddbar_check_up_to(*cp1, 2);
    CHECK(v.holds);
    CHECK(v.checked_through == 4);
    CHECK(v.complete);

    auto iw = algebra(kIwasawa);
    CHECK(ddbar_check_up_to(*iw, 0).holds);
    CHECK_FALSE(ddbar_check_up_to(*iw, 1).holds);
    auto f = ddbar_check_up_to(*iw, 2);
    CHECK_FALSE(f.holds);
    CHECK_FALSE(f.complete);
    REQUIRE(f.failing);
    CHECK(*f.failing == 2);
    CHECK(to_string(*iw, *f.witness) == "abar*bbar");

    CHECK_THROWS_AS(ddbar_check_up_to(*iw, 3), Error);
    CHECK_THROWS_AS(ddbar_check_up_to(*algebra(kSquare), 0), Error);
}

TEST_CASE("lemma up to degree s is monotone in s", "[lemma][property]")
{
    for (const char* text : {kCp1Model, kIwasawa}) {
        auto a = algebra(with_truncation(text, 7));
        bool previous = true;
        for (int s = 0; s + 3 <= a->top_degree(); ++s) {
            bool now = ddbar_check_up_to(*a, s).holds;
            CHECK((previous || !now));
            previous = now;
        }
    }
}

TEST_CASE("global lemma on free algebras", "[lemma]")
{
    auto cp1 = algebra(kCp1Model);
    auto v = ddbar_check_global(*cp1);
    CHECK(v.holds);
    CHECK(v.complete);
    CHECK(v.checked_through == 2);
    bool vanishing_rows = std::any_of(v.rows.begin(), v.rows.end(),
                                      [](const DdbarRow& r) { return r.status == DdbarRow::Status::VanishingBySd; });
    CHECK(vanishing_rows);

    auto iw = ddbar_check_global(*algebra(kIwasawa));
    CHECK_FALSE(iw.holds);
    CHECK_FALSE(iw.complete);

    auto small = with_truncation(kCp1Model, 3);
    CHECK_THROWS_AS(ddbar_check_global(*algebra(small)), Error);
}

TEST_CASE("zigzag and ∂∂̄-Lemma oracles agree on random bicomplexes", "[lemma][property]")
{
    std::mt19937 rng(1234);
    for (int trial = 0; trial < 80; ++trial) {
        auto s = random_shape_sum(rng);
        auto a = algebra(s.presentation());
        bool only = zigzag_decompose(*a).only_dots_and_squares();
        CHECK(ddbar_check_global(*a).holds == only);
        CHECK(iso_everywhere(bc_to_a_iso_table(*a)) == only);
    }
}

TEST_CASE("promotion through Serre duality", "[lemma]")
{
    auto cp1 = algebra(kCp1Model);
    auto v = sd_promotion_check(*cp1, 1);
    CHECK(v.holds);
    CHECK(v.notes.back() == "direct global check agrees");

    auto ring = algebra(R"(
kind finite
basis u bidegree (0,0)
basis x bidegree (1,1)
basis y bidegree (2,2)
mul x x = y
)");
    CHECK(sd_promotion_check(*ring, 2).holds);

    try {
        sd_promotion_check(*algebra(kSquare), 1);
        FAIL("expected PreconditionFailed");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::PreconditionFailed);
    }
}
