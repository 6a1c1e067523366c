#include "formality/corpus.hpp"

#include "formality/io.hpp"

namespace formality {

namespace {

const char* kDot = R"(
name dot
kind finite
basis e bidegree (0,0)
)";

const char* kSquare = R"(
name square
kind finite
basis a bidegree (0,0)
basis b bidegree (1,0)
basis c bidegree (0,1)
basis e bidegree (1,1)
del a = b
delbar a = c
del c = e
delbar b = -e
)";

const char* kZigzag2 = R"(
name zigzag2
kind finite
basis a bidegree (1,0)
basis b bidegree (1,1)
delbar a = b
)";

const char* kCp1Model = R"(
name cp1-model
kind free
truncation 4
sd-target 1
generator x bidegree (1,1)
generator r bidegree (1,1)
generator rp bidegree (2,1)
generator rq bidegree (1,2)
del r = rp
delbar r = rq
delbar rp = -1*x*x
del rq = x*x
)";

const char* kCp1xCp1 = R"(
name cp1xcp1-ring
kind finite
sd-target 2
basis u bidegree (0,0)
basis x bidegree (1,1)
basis y bidegree (1,1)
basis w bidegree (2,2)
mul u u = u
mul x y = w
)";

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

// b₂ = 0: two Serre-dual pairs of degree-3 classes; every product of two of
// them other than the pairings vanishes (relations only in degree 6).
const char* kClemens = R"(
name clemens-shape
kind finite
sd-target 3
basis u bidegree (0,0)
basis a bidegree (2,1)
basis b bidegree (2,1)
basis c bidegree (1,2)
basis e bidegree (1,2)
basis w bidegree (3,3)
mul u u = u
mul a c = w
mul b e = w
)";

// Two (1,1) classes with x² = y² = z.
const char* kK3Reduced = R"(
name k3-shape-reduced
kind finite
sd-target 2
basis u bidegree (0,0)
basis x bidegree (1,1)
basis y bidegree (1,1)
basis z bidegree (2,2)
mul u u = u
mul x x = z
mul y y = z
)";

// C[x]/(x^{top+1}) with |x| = (1,1), basis u, x1, ..., x_top.
Presentation projective_ring(const std::string& name, int top)
{
    Presentation p;
    p.name = name;
    p.kind = AlgebraKind::Finite;
    p.sd_target = top;
    p.add_symbol("u", {0, 0});
    for (int j = 1; j <= top; ++j)
        p.add_symbol("x" + std::to_string(j), {j, j});
    p.mul[{0, 0}] = Poly{Term{Scalar(1), {0}}};
    for (uint32_t i = 1; i <= static_cast<uint32_t>(top); ++i)
        for (uint32_t j = i; i + j <= static_cast<uint32_t>(top); ++j)
            p.mul[{i, j}] = Poly{Term{Scalar(1), {i + j}}};
    return p;
}

std::function<Presentation()> text(const char* t)
{
    return [t] { return parse_presentation(t, "corpus"); };
}

Presentation central(bool special)
{
    auto built = central_model(central_n3_input(special));
    return built.completed.map.model->presentation();
}

}  // namespace

HodgeInput central_n3_input(bool special)
{
    HodgeInput h;
    h.n = 3;
    if (special) {
        h.name = "central-n3-special";
        h.primitive_dims = {{{2, 1}, 1}, {{1, 2}, 1}};
        h.special = HodgeInput::Special{1, Scalar(1), Scalar(0)};
    } else {
        h.name = "central-n3-generic";
        h.primitive_dims = {{{2, 1}, 2}, {{1, 2}, 2}};
    }
    return h;
}

const std::vector<CorpusEntry>& corpus()
{
    static const std::vector<CorpusEntry> entries{
        {"dot", "one class in bidegree (0,0)", text(kDot)},
        {"square", "a single square", text(kSquare)},
        {"zigzag2", "zigzag of length 2: fails the ∂∂̄-Lemma", text(kZigzag2)},
        {"cp1-ring", "cohomology of CP^1", [] { return projective_ring("cp1-ring", 1); }},
        {"cp2-ring", "cohomology of CP^2", [] { return projective_ring("cp2-ring", 2); }},
        {"cp3-ring", "cohomology of CP^3", [] { return projective_ring("cp3-ring", 3); }},
        {"cp1-model", "bigraded model of CP^1 (x, r, ∂r, ∂̄r)", text(kCp1Model)},
        {"cp1xcp1-ring", "cohomology of CP^1 x CP^1", text(kCp1xCp1)},
        {"iwasawa-style", "Iwasawa-type free algebra: not strongly formal", text(kIwasawa)},
        {"central-n3-generic", "central cohomology model, n = 3, P3 of dimension 4", [] { return central(false); }},
        {"central-n3-special", "central cohomology model, n = 3, h^{1,1} = 2, ∂∂̄ξ = η² - x²",
         [] { return central(true); }},
        {"clemens-shape", "degree-3 classes only, relations in degree 6", text(kClemens)},
        {"k3-shape-reduced", "2-dimensional Serre duality ring with h^{1,1} = 2", text(kK3Reduced)},
    };
    return entries;
}

Presentation corpus_presentation(const std::string& name)
{
    for (const auto& e : corpus())
        if (e.name == name)
            return e.presentation();
    throw Error(ErrorKind::UnknownCorpusEntry, "no corpus entry named " + name, name);
}

}  // namespace formality
