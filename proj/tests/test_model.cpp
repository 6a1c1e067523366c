#include "formality/lemma.hpp"
#include "formality/model.hpp"
#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace test_support;

namespace {

std::shared_ptr<const FiniteCbba> ring(const std::string& text)
{
    return std::dynamic_pointer_cast<const FiniteCbba>(algebra(text));
}

// C[x]/(x^{top+1}) with |x| = (1,1).
std::string truncated_polynomial(int top)
{
    std::string s = "kind finite\nbasis u bidegree (0,0)\nmul u u = u\n";
    for (int j = 1; j <= top; ++j)
        s += "basis x" + std::to_string(j) + " bidegree (" + std::to_string(j) + "," + std::to_string(j) + ")\n";
    for (int i = 1; i <= top; ++i)
        for (int j = i; i + j <= top; ++j)
            s += "mul x" + std::to_string(i) + " x" + std::to_string(j) + " = x" + std::to_string(i + j) + "\n";
    return s;
}

Presentation just_x()
{
    Presentation p;
    p.name = "x";
    p.add_symbol("x", {1, 1});
    return p;
}

}  // namespace

TEST_CASE("completion of the projective line", "[model]")
{
    auto target = ring(truncated_polynomial(1));
    auto out = complete_model(just_x(), {target->symbol(1)}, target, 4);
    CHECK(out.report.triples_added == std::vector<std::string>{"r"});
    CHECK(out.report.closed_added.empty());
    CHECK(out.report.dims_match());
    // Same algebra as the hand-written cp1 model.
    auto ref = free_algebra(kCp1Model);
    const auto& m = *out.map.model;
    REQUIRE(m.num_generators() == ref->num_generators());
    for (uint32_t g = 0; g < m.num_generators(); ++g) {
        CHECK(m.generator_symbol(g) == ref->generator_symbol(g));
        CHECK(to_string(m, m.generator_del(g)) == to_string(*ref, ref->generator_del(g)));
        CHECK(to_string(m, m.generator_delbar(g)) == to_string(*ref, ref->generator_delbar(g)));
    }
    CHECK(m.minimal());
}

TEST_CASE("completion of the projective plane", "[model]")
{
    auto target = ring(truncated_polynomial(2));
    auto out = complete_model(just_x(), {target->symbol(1)}, target, 8);
    CHECK(out.report.triples_added.size() == 1);
    CHECK(out.map.model->generator_symbol(1).bd == Bidegree{2, 2});
    CHECK(out.report.dims_match());
}

TEST_CASE("completion from nothing names generators after the target", "[model]")
{
    auto target = ring(truncated_polynomial(1));
    Presentation empty;
    empty.name = "empty";
    auto out = complete_model(empty, {}, target, 4);
    CHECK(out.report.closed_added == std::vector<std::string>{"x1"});
    CHECK(out.report.dims_match());
}

TEST_CASE("completion of a formal target with zero differentials adds nothing below D", "[model]")
{
    // Exterior algebra on one odd class: already free.
    auto target = ring("kind finite\nbasis u bidegree (0,0)\nbasis a bidegree (2,1)\nmul u u = u\n");
    auto out = complete_model(Presentation{}, {}, target, 5);
    CHECK(out.report.closed_added.size() == 1);
    CHECK(out.report.triples_added.empty());
}

TEST_CASE("completion rejects a target failing the ddbar lemma", "[model]")
{
    auto target = ring(std::string(kZigzag2) + "basis u bidegree (0,0)\nmul u u = u\n");
    try {
        complete_model(Presentation{}, {}, target, 4);
        FAIL("expected TargetNotDdbar");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::TargetNotDdbar);
    }
}

namespace {

HodgeInput quintic_like()
{
    HodgeInput h;
    h.name = "quintic-like";
    h.n = 3;
    h.primitive_dims = {{{2, 1}, 2}, {{1, 2}, 2}};
    return h;
}

HodgeInput special_n3()
{
    HodgeInput h;
    h.name = "special";
    h.n = 3;
    h.primitive_dims = {{{2, 1}, 1}, {{1, 2}, 1}};
    h.special = HodgeInput::Special{1, Scalar(1), Scalar(0)};
    return h;
}

}  // namespace

TEST_CASE("hodge ring satisfies Serre duality", "[model]")
{
    auto ring_q = std::dynamic_pointer_cast<const FiniteCbba>(validate(hodge_ring(quintic_like())));
    CHECK(pairing_check(*ring_q, 3).holds);
    CHECK(ddbar_check_global(*ring_q).holds);
    auto ring_s = std::dynamic_pointer_cast<const FiniteCbba>(validate(hodge_ring(special_n3())));
    CHECK(pairing_check(*ring_s, 3).holds);
    CHECK(ring_s->dim({1, 1}) == 2);
}

TEST_CASE("central model, generic branch", "[model][slow]")
{
    auto built = central_model(quintic_like());
    const auto& a = *built.completed.map.model;
    CHECK(built.certificate.s == 2);
    CHECK(built.certificate.n_elements().empty());
    CHECK(built.certificate.witnesses.empty());
    CHECK(built.completed.report.dims_match());
    CHECK(s_strong_check(a, 2).holds);
}

TEST_CASE("central model, special branch", "[model][slow]")
{
    auto built = central_model(special_n3());
    const auto& a = *built.completed.map.model;
    REQUIRE(built.certificate.n_elements().size() == 1);
    CHECK(to_string(a, built.certificate.n_elements()[0]) == "xi");
    CHECK(built.completed.report.dims_match());
    CHECK(split_verify(a, built.certificate, 2).passed);
    CHECK(s_strong_check(a, 2).holds);
}

TEST_CASE("holomorphic primitives leave an unkillable class in the (0,*) row", "[model]")
{
    // r with ∂∂̄r = x·p03 sits at (0,3); p03·∂̄r is closed at (0,7) and
    // nothing of bidegree (-1,6) can make it ∂∂̄-exact.
    auto h = quintic_like();
    h.primitive_dims = {{{3, 0}, 1}, {{2, 1}, 1}, {{1, 2}, 1}, {{0, 3}, 1}};
    try {
        central_model(h);
        FAIL("expected UnsupportedInput");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnsupportedInput);
    }
}

TEST_CASE("central model contract", "[model]")
{
    auto h = quintic_like();
    h.primitive_dims[{1, 1}] = 1;
    CHECK_THROWS_AS(hodge_ring(h), Error);
    try {
        hodge_ring(h);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::WidthViolated);
    }
    auto s = special_n3();
    s.n = 5;
    s.primitive_dims = {};
    try {
        hodge_ring(s);
        FAIL("expected SpecialBranchInconsistent");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SpecialBranchInconsistent);
    }
}

TEST_CASE("relations injectivity", "[model]")
{
    CHECK(relations_injectivity_check(ring(truncated_polynomial(1)), 1).holds);
    auto r = relations_injectivity_check(ring(truncated_polynomial(1)), 3);
    CHECK_FALSE(r.holds);
    CHECK(r.failing_degree == 4);
    // y^2 = 0 with |y| = 2 and n = 3: relation at degree 4 < 5.
    auto y = relations_injectivity_check(
        ring("kind finite\nbasis u bidegree (0,0)\nbasis y bidegree (1,1)\nmul u u = u\n"), 3);
    CHECK_FALSE(y.holds);
    CHECK(y.failing_degree == 4);
    // A free exterior algebra has no relations.
    CHECK(relations_injectivity_check(
              ring("kind finite\nbasis u bidegree (0,0)\nbasis a bidegree (2,1)\nmul u u = u\n"), 3)
              .holds);
}

TEST_CASE("special branch ideal witnesses follow the closed form", "[model][slow]")
{
    // Every closed element γ of the ideal generated by ξ is
    // ∂∂̄(½ξ²b₁ + ξd₀) with b₁, d₀ polynomials in x and η.
    auto built = central_model(special_n3());
    const auto& a = *built.completed.map.model;
    auto gen = [&](const std::string& name) {
        for (uint32_t g = 0; g < a.num_generators(); ++g)
            if (a.generator_symbol(g).name == name)
                return a.generator(g);
        FAIL("missing generator " << name);
        return Element();
    };
    Element xi = gen("xi"), x = gen("x"), eta = gen("eta");
    auto ddbar = [&](const Element& e) { return del(a, delbar(a, e)); };
    auto monomials = [&](int t) {
        std::vector<Element> out;
        if (t < 0)
            return out;
        for (int i = 0; i <= t; ++i) {
            Element m = a.unit();
            for (int k = 0; k < i; ++k)
                m = multiply(a, m, x);
            for (int k = i; k < t; ++k)
                m = multiply(a, m, eta);
            out.push_back(m);
        }
        return out;
    };
    Element half_xi2 = multiply(a, xi, xi).scaled(Scalar(1) / Scalar(2));

    std::size_t checked = 0;
    for (const auto& w : built.certificate.witnesses) {
        if (w.kind != IdealWitness::Kind::DdbarPrimitive)
            continue;
        INFO(to_string(a, w.element));
        REQUIRE(w.bd.p == w.bd.q);
        int k = w.bd.p;
        std::vector<Element> forms;
        for (const auto& b1 : monomials(k - 3))
            forms.push_back(multiply(a, half_xi2, b1));
        for (const auto& d0 : monomials(k - 2))
            forms.push_back(multiply(a, xi, d0));
        std::vector<SparseVec> cols;
        for (const auto& f : forms)
            cols.push_back(ddbar(f).at(w.bd));
        auto c = solve(SparseMatrix::from_columns(a.dim(w.bd), cols), w.element.at(w.bd));
        REQUIRE(c);
        Element closed_form;
        for (const auto& [j, v] : c->entries())
            closed_form.axpy(v, forms[j]);
        CHECK(ddbar(closed_form) == w.element);
        CHECK(ddbar(w.primitive - closed_form).is_zero());
        ++checked;
    }
    CHECK(checked > 0);
}

namespace {

CompletedModel projective_model(int top, int D)
{
    auto target = ring(truncated_polynomial(top));
    return complete_model(just_x(), {target->symbol(1)}, target, D);
}

// Images of the basis u, x1, ..., x_top under x -> image, extended multiplicatively.
std::vector<Element> powers_of(const FiniteCbba& a, const Element& image, int top)
{
    std::vector<Element> out{a.unit()};
    for (int j = 1; j <= top; ++j)
        out.push_back(multiply(a, out.back(), image));
    return out;
}

const char* kK3Reduced = R"(
name k3-shape-reduced
kind finite
basis u bidegree (0,0)
basis x bidegree (1,1)
basis y bidegree (1,1)
basis z bidegree (2,2)
mul u u = u
mul x x = z
mul y y = z
)";

}  // namespace

TEST_CASE("lefschetz extension from the projective plane to the line", "[model][lefschetz]")
{
    RestrictionInput in;
    in.n = 1;
    in.b_model = projective_model(2, 6);
    in.a_ring = ring(truncated_polynomial(1));
    in.restriction = powers_of(*in.a_ring, in.a_ring->symbol(1), 2);
    auto out = lefschetz_extend(in, 4);
    CHECK(out.h_generators.empty());
    CHECK(out.k_generators.empty());
    CHECK(out.completed.report.dims_match());
    CHECK(out.snapshot_checks > 0);
    CHECK(out.certificate.s == 2);
    auto rep = split_verify(*out.completed.map.model, out.certificate, 2);
    INFO((rep.failures.empty() ? "" : rep.failures.front()));
    CHECK(rep.passed);
}

TEST_CASE("lefschetz extension to a reduced K3 shape", "[model][lefschetz]")
{
    RestrictionInput in;
    in.n = 2;
    in.b_model = projective_model(3, 8);
    in.a_ring = ring(kK3Reduced);
    in.restriction = powers_of(*in.a_ring, in.a_ring->symbol(1), 3);
    auto out = lefschetz_extend(in, 6);
    CHECK(out.h_generators == std::vector<std::string>{"y"});
    CHECK(out.k_generators.empty());
    CHECK(out.completed.report.dims_match());
    CHECK(out.certificate.s == 4);
    auto rep = split_verify(*out.completed.map.model, out.certificate, 4);
    INFO((rep.failures.empty() ? "" : rep.failures.front()));
    CHECK(rep.passed);
}

TEST_CASE("lefschetz extension contract", "[model][lefschetz]")
{
    RestrictionInput in;
    in.n = 2;
    in.b_model = projective_model(1, 6);
    in.a_ring = ring("kind finite\nbasis u bidegree (0,0)\nmul u u = u\n");
    in.restriction = {in.a_ring->unit(), Element()};
    try {
        lefschetz_extend(in, 6);
        FAIL("expected RestrictionContractViolated");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::RestrictionContractViolated);
        CHECK(std::string(e.what()).find("not injective at (1,1)") != std::string::npos);
    }
    in.restriction = {in.a_ring->unit()};
    CHECK_THROWS_AS(lefschetz_extend(in, 6), Error);
}

TEST_CASE("lefschetz extension along the identity reproduces the model", "[model][lefschetz]")
{
    RestrictionInput in;
    in.n = 2;
    in.b_model = projective_model(2, 6);
    in.a_ring = in.b_model.map.target;
    in.restriction = powers_of(*in.a_ring, in.a_ring->symbol(1), 2);
    auto out = lefschetz_extend(in, 6);
    CHECK(out.h_generators.empty());
    CHECK(out.k_generators.empty());
    const auto& m = *out.completed.map.model;
    const auto& b = *in.b_model.map.model;
    REQUIRE(m.num_generators() == b.num_generators());
    for (uint32_t g = 0; g < m.num_generators(); ++g)
        CHECK(m.generator_symbol(g) == b.generator_symbol(g));
    CHECK(split_verify(m, out.certificate, 4).passed);
}
