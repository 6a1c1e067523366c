#include "catch2/catch_amalgamated.hpp"

#include "formality/linalg.hpp"

#include <random>

using namespace formality;

namespace {

SparseMatrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols)
{
    std::uniform_int_distribution<int> coef(-2, 2);
    std::uniform_int_distribution<int> density(0, 2);
    SparseMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (density(rng) == 0)
                m.set(r, c, Scalar(mpq_class(coef(rng)), mpq_class(coef(rng) % 2)));
    return m;
}

SparseVec random_vector(std::mt19937& rng, std::size_t n)
{
    std::uniform_int_distribution<int> coef(-3, 3);
    SparseVec v;
    for (std::size_t i = 0; i < n; ++i)
        v.push_back(static_cast<uint32_t>(i), Scalar(coef(rng)));
    return v;
}

}  // namespace

TEST_CASE("scalar arithmetic is exact", "[exactla]")
{
    Scalar a(mpq_class(1, 2), mpq_class(1, 3));
    CHECK((a * a.inverse()).is_one());
    CHECK((Scalar::i() * Scalar::i()) == Scalar(-1));
    CHECK(a.to_string() == "1/2+1/3*i");
    CHECK(Scalar(mpq_class(-1, 2), mpq_class(-1)).to_string() == "-1/2-i");
    CHECK(Scalar(mpq_class(6, 4)).to_string() == "3/2");
}

TEST_CASE("rref examples", "[exactla]")
{
    SECTION("[[1,i],[-i,1]] has rank 1")
    {
        auto m = SparseMatrix::from_dense({{1, Scalar::i()}, {-Scalar::i(), 1}});
        auto r = rref(m);
        CHECK(r.rank() == 1);
        CHECK(r.pivots == std::vector<std::size_t>{0});
        CHECK(r.rref.at(0, 1) == Scalar::i());
        CHECK(r.rref.row(1).empty());
    }
    SECTION("zero matrix")
    {
        SparseMatrix z(3, 4);
        auto r = rref(z);
        CHECK(r.rank() == 0);
        CHECK(r.rref.is_zero());
    }
    SECTION("identity")
    {
        auto r = rref(SparseMatrix::identity(3));
        CHECK(r.rref == SparseMatrix::identity(3));
        CHECK(r.pivots == std::vector<std::size_t>{0, 1, 2});
    }
}

TEST_CASE("solve examples", "[exactla]")
{
    SparseVec b;
    b.push_back(0, 4);
    b.push_back(2, Scalar::i());
    CHECK(solve(SparseMatrix::identity(3), b) == b);

    auto wide = SparseMatrix::from_dense({{1, 1}});
    auto x = solve(wide, SparseVec::unit(0, 2));
    REQUIRE(x);
    CHECK(*x == SparseVec::unit(0, 2));

    auto tall = SparseMatrix::from_dense({{1}, {1}});
    SparseVec rhs;
    rhs.push_back(0, 1);
    rhs.push_back(1, 2);
    CHECK_FALSE(solve(tall, rhs).has_value());

    CHECK_THROWS_AS(solve(tall, SparseVec::unit(5, 1)), std::invalid_argument);
}

TEST_CASE("subspace operations", "[exactla]")
{
    auto e = [](uint32_t i) { return SparseVec::unit(i); };
    std::vector<SparseVec> a1{e(0)}, a2{e(1)};
    auto s1 = Subspace::span(3, a1);
    auto s2 = Subspace::span(3, a2);
    CHECK(intersect(s1, s1) == s1);
    std::vector<SparseVec> both{e(0), e(1)};
    CHECK(sum(s1, s2) == Subspace::span(3, both));
    CHECK(intersect(s1, s2).is_zero());

    auto reps = quotient_basis(Subspace::full(3), s1);
    REQUIRE(reps.size() == 2);
    CHECK(reps[0] == e(1));
    CHECK(reps[1] == e(2));

    CHECK_THROWS_AS(sum(s1, Subspace(4)), std::invalid_argument);
}

TEST_CASE("linear algebra properties on random matrices", "[exactla][property]")
{
    std::mt19937 rng(20261015);
    for (int trial = 0; trial < 150; ++trial) {
        std::size_t rows = 1 + rng() % 6, cols = 1 + rng() % 7;
        auto m = random_matrix(rng, rows, cols);
        auto r1 = rref(m);
        auto r2 = rref(r1.rref);
        CHECK(r2.rref == r1.rref);
        CHECK(r1.rank() + kernel_basis(m).size() == cols);
        for (const auto& k : kernel_basis(m))
            CHECK(m.apply(k).empty());

        auto b = m.apply(random_vector(rng, cols));
        auto x = solve(m, b);
        REQUIRE(x);
        CHECK(m.apply(*x) == b);

        auto other = random_matrix(rng, 1 + rng() % 4, cols);
        std::vector<SparseVec> ra, rb;
        for (std::size_t i = 0; i < m.rows(); ++i)
            ra.push_back(m.row(i));
        for (std::size_t i = 0; i < other.rows(); ++i)
            rb.push_back(other.row(i));
        auto sa = Subspace::span(cols, ra), sb = Subspace::span(cols, rb);
        auto cap = intersect(sa, sb);
        CHECK(sa.contains(cap));
        CHECK(sb.contains(cap));
        CHECK(sum(sa, sb).contains(sa));
        CHECK(cap.dim() + sum(sa, sb).dim() == sa.dim() + sb.dim());
    }
}

TEST_CASE("quotient coordinates reconstruct classes", "[exactla]")
{
    auto e = [](uint32_t i) { return SparseVec::unit(i); };
    std::vector<SparseVec> z{e(0), e(1), e(2)}, bd{e(0) + e(1)};
    Quotient q(Subspace::span(4, z), Subspace::span(4, bd));
    REQUIRE(q.dim() == 2);
    auto c = q.coordinates(e(0) + e(1));
    REQUIRE(c);
    CHECK((*c)[0].is_zero());
    CHECK((*c)[1].is_zero());
    CHECK_FALSE(q.coordinates(e(3)).has_value());
}
