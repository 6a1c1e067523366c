#include "catch2/catch_amalgamated.hpp"

#include "formality/finite_cbba.hpp"
#include "formality/subalgebra.hpp"
#include "support.hpp"


using namespace formality;
using namespace test_support;

namespace {

ErrorKind error_of(const std::string& text)
{
    try {
        algebra(text);
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected a validation error");
    return ErrorKind::Syntax;
}

Element gen(const FreeCbba& a, const std::string& name) { return a.generator(*a.presentation().index_of(name)); }

// Independent count of monomials per bidegree: coefficients of
// prod_g (1 + t^g) for odd g and prod_g 1/(1 - t^g) for even g.
std::map<Bidegree, long> generating_count(const Presentation& p, int D)
{
    std::map<Bidegree, long> series{{{0, 0}, 1}};
    for (const auto& s : p.symbols) {
        std::map<Bidegree, long> next;
        for (const auto& [bd, c] : series) {
            int maxk = s.bd.parity() ? 1 : D;
            for (int k = 0; k <= maxk; ++k) {
                Bidegree nb{bd.p + k * s.bd.p, bd.q + k * s.bd.q};
                if (nb.total() > D)
                    break;
                next[nb] += c;
            }
        }
        series = std::move(next);
    }
    return series;
}

const char* kMixed = R"(
kind free
truncation 6
generator a bidegree (1,0)
generator b bidegree (0,1)
generator x bidegree (1,1)
generator c bidegree (1,2)
generator y bidegree (2,0)
del c = x*x + a*b*x
delbar y = a*x
)";

}  // namespace

TEST_CASE("monomial bases", "[bigraded]")
{
    auto x = free_algebra("kind free\ntruncation 4\ngenerator x bidegree (1,1)\n");
    REQUIRE(x->monomial_basis({2, 2}).size() == 1);
    CHECK(x->basis_label({2, 2}, 0) == "x*x");
    CHECK(x->monomial_basis({1, 0}).empty());

    auto ab = free_algebra("kind free\ntruncation 3\ngenerator a bidegree (1,0)\ngenerator b bidegree (0,1)\n");
    REQUIRE(ab->monomial_basis({1, 1}).size() == 1);
    CHECK(ab->basis_label({1, 1}, 0) == "a*b");
    CHECK_THROWS_AS(ab->monomial_basis({2, 2}), Error);

    auto cp1 = free_algebra(kCp1Model);
    std::vector<std::string> labels;
    for (uint32_t i = 0; i < cp1->dim({2, 2}); ++i)
        labels.push_back(cp1->basis_label({2, 2}, i));
    CHECK(labels == std::vector<std::string>{"x*x", "x*r", "r*r"});
}

TEST_CASE("monomial counts match the generating function", "[bigraded][property]")
{
    for (const char* text : {kCp1Model, kMixed}) {
        auto a = free_algebra(text);
        auto expected = generating_count(a->presentation(), a->top_degree());
        for (const auto& [bd, count] : expected)
            CHECK(static_cast<long>(a->dim(bd)) == count);
        for (int t = 0; t <= a->top_degree(); ++t)
            for (Bidegree bd : a->slices(t))
                CHECK(expected.count(bd));
    }
}

TEST_CASE("Koszul-signed products", "[bigraded]")
{
    auto a = free_algebra("kind free\ntruncation 4\ngenerator a bidegree (1,0)\ngenerator b bidegree (0,1)\n"
                          "generator x bidegree (1,1)\n");
    Element ea = gen(*a, "a"), eb = gen(*a, "b"), ex = gen(*a, "x");
    CHECK(multiply(*a, ea, ea).is_zero());
    CHECK(to_string(*a, multiply(*a, ea, eb)) == "a*b");
    CHECK(to_string(*a, multiply(*a, eb, ea)) == "-a*b");
    CHECK(to_string(*a, multiply(*a, ex, ex)) == "x*x");
    CHECK_THROWS_AS(multiply(*a, multiply(*a, ex, ex), ea), Error);
}

TEST_CASE("differentials", "[bigraded]")
{
    auto a = free_algebra(kCp1Model);
    Element x = gen(*a, "x"), r = gen(*a, "r");
    CHECK(del(*a, x).is_zero());
    CHECK(to_string(*a, delbar(*a, del(*a, r))) == "-x*x");
    CHECK(to_string(*a, ddbar(*a, r)) == "x*x");
    CHECK(a->minimal());
    CHECK_THROWS_AS(del(*a, multiply(*a, x, r)), Error);
}

TEST_CASE("Leibniz rule and square-zero on all monomials", "[bigraded][property]")
{
    for (const char* text : {kCp1Model, kMixed}) {
        auto a = free_algebra(text);
        int D = a->top_degree();
        for (int t = 0; t <= D - 2; ++t)
            for (Bidegree bd : a->slices(t))
                for (uint32_t i = 0; i < a->dim(bd); ++i) {
                    Element m = Element::basis(bd, i);
                    CHECK(del(*a, del(*a, m)).is_zero());
                    CHECK(delbar(*a, delbar(*a, m)).is_zero());
                    CHECK((del(*a, delbar(*a, m)) + delbar(*a, del(*a, m))).is_zero());
                }
        for (int t1 = 0; t1 <= D - 1; ++t1)
            for (Bidegree b1 : a->slices(t1))
                for (int t2 = 0; t1 + t2 <= D - 1; ++t2)
                    for (Bidegree b2 : a->slices(t2))
                        for (uint32_t i = 0; i < a->dim(b1); ++i)
                            for (uint32_t j = 0; j < a->dim(b2); ++j) {
                                Element u = Element::basis(b1, i), v = Element::basis(b2, j);
                                Scalar sign = t1 % 2 ? Scalar(-1) : Scalar(1);
                                CHECK(d(*a, multiply(*a, u, v)) ==
                                      multiply(*a, d(*a, u), v) + sign * multiply(*a, u, d(*a, v)));
                            }
    }
}

TEST_CASE("product is associative and graded-commutative on basis monomials", "[bigraded][property]")
{
    auto a = free_algebra(kMixed);
    int D = a->top_degree();
    std::vector<Element> mons;
    for (int t = 0; t <= D; ++t)
        for (Bidegree bd : a->slices(t))
            for (uint32_t i = 0; i < a->dim(bd); ++i)
                mons.push_back(Element::basis(bd, i));
    auto deg = [](const Element& e) { return e.bidegree()->total(); };
    for (const auto& u : mons)
        for (const auto& v : mons) {
            if (deg(u) + deg(v) > D)
                continue;
            Element uv = multiply(*a, u, v);
            Scalar sign = (deg(u) % 2 && deg(v) % 2) ? Scalar(-1) : Scalar(1);
            CHECK(uv == sign * multiply(*a, v, u));
            for (const auto& w : mons)
                if (deg(u) + deg(v) + deg(w) <= D)
                    CHECK(multiply(*a, uv, w) == multiply(*a, u, multiply(*a, v, w)));
        }
}

TEST_CASE("validation errors", "[bigraded]")
{
    CHECK(error_of("kind free\ntruncation 3\ngenerator a bidegree (1,0)\ndel a = a*a\n") == ErrorKind::GradingViolation);
    CHECK(error_of("kind free\ntruncation 3\ngenerator a bidegree (1,0)\ndel a = 1\n") == ErrorKind::GradingViolation);
    CHECK(error_of("kind free\ntruncation 3\ngenerator a bidegree (1,0)\ngenerator b bidegree (1,0)\ndel a = a*b\n") ==
          ErrorKind::NonNilpotentOrder);
    CHECK(error_of("kind free\ntruncation 3\ngenerator a bidegree (0,0)\n") == ErrorKind::GradingViolation);
    std::string flipped = kSquare;
    flipped.replace(flipped.find("-e"), 2, "e");
    CHECK(error_of(flipped) == ErrorKind::NonSquareZero);
    CHECK(error_of("kind free\ntruncation 4\ngenerator a bidegree (1,0)\ngenerator b bidegree (0,1)\n"
                   "generator c bidegree (1,0)\ndel c = a*b\n") == ErrorKind::GradingViolation);
    // ∂c = x with ∂x = y: ∂∂c = y ≠ 0
    CHECK(error_of("kind free\ntruncation 5\ngenerator c bidegree (1,0)\ngenerator x bidegree (2,0)\n"
                   "generator y bidegree (3,0)\ndel c = x\ndel x = y\n") == ErrorKind::NonSquareZero);
    CHECK(error_of("kind finite\nbasis u bidegree (0,0)\nbasis x bidegree (1,1)\nmul x x = u\n") ==
          ErrorKind::GradingViolation);
    CHECK(error_of("kind finite\nbasis u bidegree (0,0)\nbasis a bidegree (1,0)\nbasis b bidegree (0,1)\n"
                   "basis c bidegree (1,1)\nmul a b = c\nmul b a = c\n") == ErrorKind::ProductAxiomViolation);
    // ∂(x*x) = ∂z = 0 but 2*x*∂x = 2w
    CHECK(error_of("kind finite\nbasis u bidegree (0,0)\nbasis x bidegree (1,1)\nbasis y bidegree (2,1)\n"
                   "basis z bidegree (2,2)\nbasis w bidegree (3,2)\ndel x = y\nmul x x = z\nmul x y = w\n") ==
          ErrorKind::LeibnizViolation);
    CHECK(error_of("kind free\ngenerator a bidegree (1,0)\n") == ErrorKind::InsufficientTruncation);
}

TEST_CASE("finite kind products", "[bigraded]")
{
    auto ring = algebra("kind finite\nbasis one bidegree (0,0)\nbasis x bidegree (1,1)\nbasis x2 bidegree (2,2)\n"
                        "mul x x = x2\n");
    auto& f = dynamic_cast<const FiniteCbba&>(*ring);
    CHECK(to_string(*ring, multiply(*ring, f.symbol(1), f.symbol(1))) == "x2");
    CHECK(multiply(*ring, f.symbol(1), f.symbol(2)).is_zero());
    CHECK(to_string(*ring, f.symbol(0)) == "1");
    CHECK(ring->top_degree() == 4);
}

TEST_CASE("generated sub-cbba", "[bigraded]")
{
    auto x = free_algebra("kind free\ntruncation 6\ngenerator x bidegree (1,1)\n");
    auto fam = generated_sub_cbba(*x, 2);
    for (int t = 0; t <= 6; ++t)
        for (Bidegree bd : x->slices(t))
            CHECK(fam.at(*x, bd).dim() == x->dim(bd));

    auto cp1 = free_algebra(kCp1Model);
    auto s1 = generated_sub_cbba(*cp1, 1);
    CHECK(s1.at(*cp1, {0, 0}).dim() == 1);
    for (int t = 1; t <= 4; ++t)
        for (Bidegree bd : cp1->slices(t))
            CHECK(s1.at(*cp1, bd).is_zero());

    auto s2 = generated_sub_cbba(*cp1, 2);
    CHECK(s2.at(*cp1, {2, 1}).contains(del(*cp1, gen(*cp1, "r")).at({2, 1})));
    CHECK(s2.at(*cp1, {1, 2}).contains(delbar(*cp1, gen(*cp1, "r")).at({1, 2})));
    CHECK(s2.at(*cp1, {2, 2}).contains(multiply(*cp1, gen(*cp1, "x"), gen(*cp1, "x")).at({2, 2})));
}

TEST_CASE("generated sub-cbba lies in monomials of generator degree <= s+1", "[bigraded][property]")
{
    for (const char* text : {kCp1Model, kMixed}) {
        auto a = free_algebra(text);
        for (int s = 1; s < a->top_degree(); ++s) {
            auto fam = generated_sub_cbba(*a, s);
            for (const auto& [bd, sub] : fam.slices())
                for (const auto& v : sub.basis())
                    for (const auto& [i, c] : v.entries())
                        for (const auto& [g, e] : a->monomial_basis(bd)[i].factors)
                            CHECK(a->generator_symbol(g).bd.total() <= s + 1);
        }
    }
}

TEST_CASE("ideal spans", "[bigraded]")
{
    auto x = free_algebra("kind free\ntruncation 4\ngenerator x bidegree (1,1)\n");
    CHECK(ideal_span(*x, {}, {2, 2}, nullptr, true).is_zero());
    auto sx = ideal_span(*x, {x->generator(0)}, {2, 2}, nullptr, false);
    CHECK(sx.dim() == 1);
    CHECK(sx.contains(SparseVec::unit(0)));

    // r*r also lies in the ideal generated by r, next to ∂∂̄r = x*x and x*r.
    auto cp1 = free_algebra(kCp1Model);
    auto ir = ideal_span(*cp1, {gen(*cp1, "r")}, {2, 2}, nullptr, true);
    CHECK(ir.dim() == 3);
    CHECK(ir.contains(ddbar(*cp1, gen(*cp1, "r")).at({2, 2})));
    CHECK(ir.contains(multiply(*cp1, gen(*cp1, "x"), gen(*cp1, "r")).at({2, 2})));
}
