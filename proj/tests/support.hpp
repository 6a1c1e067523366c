#pragma once

#include "formality/cohomology.hpp"
#include "formality/free_cbba.hpp"
#include "formality/io.hpp"

#include <map>
#include <memory>
#include <random>

namespace test_support {

inline formality::BicomplexPtr algebra(const std::string& text)
{
    return formality::validate(formality::parse_presentation(text, "test"));
}

inline std::shared_ptr<const formality::FreeCbba> free_algebra(const std::string& text)
{
    return std::dynamic_pointer_cast<const formality::FreeCbba>(algebra(text));
}

inline const char* kCp1Model = R"(
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
delbar rp = -1 * x*x
del rq = x*x
)";

inline const char* kSquare = R"(
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

inline const char* kDot = R"(
name dot
kind finite
basis e bidegree (0,0)
)";

inline const char* kZigzag2 = R"(
name zigzag2
kind finite
basis a bidegree (1,0)
basis b bidegree (1,1)
delbar a = b
)";

using namespace formality;

// Shape oracle: builds a finite bicomplex as a direct sum of known shapes,
// then hides the splitting by random unimodular changes of basis inside
// every bidegree.
struct ShapeSum {
    std::vector<Bidegree> grading;
    std::vector<std::vector<Scalar>> d, db;  // d[r][c]: coefficient of basis r in ∂ basis c
    std::map<std::string, std::size_t> expected;

    std::size_t add(Bidegree bd)
    {
        grading.push_back(bd);
        for (auto* m : {&d, &db}) {
            for (auto& row : *m)
                row.emplace_back();
            m->emplace_back(grading.size());
        }
        return grading.size() - 1;
    }

    void dot(Bidegree bd)
    {
        add(bd);
        ++expected[ZigzagShape{ZigzagShape::Kind::Dot, bd, {}, {}, 1}.describe()];
    }

    void square(Bidegree bd)
    {
        auto a = add(bd), b = add(bd + kDel), c = add(bd + kDelbar), e = add(bd + kDdbar);
        d[b][a] = 1;
        db[c][a] = 1;
        d[e][c] = 1;
        db[e][b] = -1;
        ++expected[ZigzagShape{ZigzagShape::Kind::Square, bd, {}, {}, 1}.describe()];
    }

    // Strip k, quiver positions [i, j] with j > i (2p = (p, k+1-p), 2p+1 = (p, k-p)).
    void zigzag(int k, int i, int j)
    {
        auto where = [k](int l) { return l % 2 == 0 ? Bidegree{l / 2, k + 1 - l / 2} : Bidegree{l / 2, k - l / 2}; };
        ZigzagShape z{ZigzagShape::Kind::Zigzag, where(i), {}, {}, 1};
        std::vector<std::size_t> idx;
        for (int l = i; l <= j; ++l) {
            idx.push_back(add(where(l)));
            z.nodes.push_back(where(l));
        }
        for (int l = i; l < j; ++l) {
            bool src_first = l % 2 == 1;
            auto s = idx[l - i + (src_first ? 0 : 1)], t = idx[l - i + (src_first ? 1 : 0)];
            if (l % 2 == 0) {
                db[t][s] = 1;
                z.word += 'b';
            } else {
                d[t][s] = 1;
                z.word += 'd';
            }
        }
        ++expected[z.describe()];
    }

    // New basis vector i := e_i + c e_j, for i != j in the same bidegree.
    void scramble(std::mt19937& rng, int rounds)
    {
        std::size_t n = grading.size();
        std::uniform_int_distribution<int> coef(-3, 3);
        for (int r = 0; r < rounds; ++r) {
            std::size_t i = rng() % n, j = rng() % n;
            if (i == j || grading[i] != grading[j])
                continue;
            Scalar c(coef(rng), coef(rng));
            for (auto* m : {&d, &db}) {
                auto& M = *m;
                // M' = E^{-1} M E with E = I + c e_j e_i^T.
                for (std::size_t row = 0; row < n; ++row)
                    M[row][i] += c * M[row][j];
                for (std::size_t col = 0; col < n; ++col)
                    M[j][col] -= c * M[i][col];
            }
        }
    }

    std::string presentation() const
    {
        Presentation p;
        p.name = "shape-sum";
        p.kind = AlgebraKind::Finite;
        for (std::size_t i = 0; i < grading.size(); ++i)
            p.add_symbol("e" + std::to_string(i), grading[i]);
        for (std::size_t c = 0; c < grading.size(); ++c)
            for (auto [m, target] : {std::pair{&d, &p.del}, std::pair{&db, &p.delbar}}) {
                Poly poly;
                for (std::size_t r = 0; r < grading.size(); ++r)
                    if (!(*m)[r][c].is_zero())
                        poly.push_back({(*m)[r][c], {static_cast<uint32_t>(r)}});
                if (!poly.empty())
                    (*target)[static_cast<uint32_t>(c)] = poly;
            }
        return serialize(p);
    }
};

inline std::map<std::string, std::size_t> inventory(const ZigzagDecomposition& z)
{
    std::map<std::string, std::size_t> out;
    for (auto s : z.shapes) {
        std::size_t m = s.multiplicity;
        s.multiplicity = 1;
        out[s.describe()] += m;
    }
    return out;
}

// Up to five shapes, at most 16 basis elements.
inline ShapeSum random_shape_sum(std::mt19937& rng)
{
    ShapeSum s;
    std::uniform_int_distribution<int> small(0, 2);
    int pieces = 1 + static_cast<int>(rng() % 5);
    for (int n = 0; n < pieces; ++n) {
        std::size_t room = 16 - s.grading.size();
        switch (rng() % 3) {
        case 0: s.dot({small(rng), small(rng)}); break;
        case 1:
            if (room >= 4)
                s.square({small(rng), small(rng)});
            break;
        default: {
            int k = small(rng) + 1;
            int i = static_cast<int>(rng() % (2 * k + 2));
            int j = i + 1 + static_cast<int>(rng() % (2 * k + 2 - i));
            j = std::min<int>(j, i + static_cast<int>(room) - 1);
            if (j > i)
                s.zigzag(k, i, j);
        }
        }
        if (s.grading.size() >= 16)
            break;
    }
    s.scramble(rng, 40);
    return s;
}

}  // namespace test_support
