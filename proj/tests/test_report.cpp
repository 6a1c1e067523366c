#include "formality/corpus.hpp"
#include "formality/specs.hpp"
#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

using namespace test_support;

namespace {

ErrorKind kind_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an Error");
    return ErrorKind::InternalContradiction;
}

}  // namespace

TEST_CASE("parse_element inverts to_string", "[report]")
{
    auto cp1 = free_algebra(kCp1Model);
    for (const char* text : {"x", "x*x", "-1*x*x", "rp + 2*rq", "r*x - x*x"}) {
        auto e = parse_element(*cp1, text);
        CHECK(parse_element(*cp1, to_string(*cp1, e)) == e);
    }
    CHECK(parse_element(*cp1, "0").is_zero());
    CHECK(to_string(*cp1, parse_element(*cp1, "x*r")) == to_string(*cp1, multiply(*cp1, cp1->generator(0), cp1->generator(1))));
    CHECK(kind_of([&] { parse_element(*cp1, "y"); }) == ErrorKind::UnknownReference);

    auto ring = validate(corpus_presentation("cp2-ring"));
    CHECK(parse_element(*ring, "x1*x1") == parse_element(*ring, "x2"));
}

TEST_CASE("certificate JSON round trip", "[report]")
{
    for (const char* name : {"cp1-model", "central-n3-special"}) {
        INFO(name);
        auto a = std::dynamic_pointer_cast<const FreeCbba>(validate(corpus_presentation(name)));
        auto cert = a->top_degree() < 5 ? promote(*a, 1) : split_search(*a, 2);
        Json j = certificate_json(*a, cert);
        auto back = certificate_from_json(*a, Json::parse(dump(j)));
        CHECK(dump(certificate_json(*a, back)) == dump(j));
        CHECK(split_verify(*a, back, 2).passed);
        CHECK(back.witnesses.size() == cert.witnesses.size());
        // Whole reports are accepted.
        CHECK(dump(certificate_json(*a, certificate_from_json(*a, Json{{"certificate", j}}))) == dump(j));
        CHECK(dump(certificate_json(*a, certificate_from_json(*a, Json{{"promotion", {{"certificate", j}}}}))) == dump(j));
    }
}

TEST_CASE("malformed certificates are syntax errors", "[report]")
{
    auto a = free_algebra(kCp1Model);
    Json j = certificate_json(*a, split_search(*a, 1));
    CHECK(kind_of([&] { certificate_from_json(*a, Json::object()); }) == ErrorKind::Syntax);
    Json bad = j;
    bad["s"] = "two";
    CHECK(kind_of([&] { certificate_from_json(*a, bad); }) == ErrorKind::Syntax);
    bad = j;
    bad["c"] = Json::array({{{"bidegree", "(1,1)"}, {"linear", "nope"}, {"subtrahend", "0"}}});
    CHECK(kind_of([&] { certificate_from_json(*a, bad); }) == ErrorKind::UnknownReference);
    CHECK(parse_bidegree("(2,3)") == Bidegree{2, 3});
    CHECK(kind_of([] { parse_bidegree("2,3"); }) == ErrorKind::Syntax);
}

TEST_CASE("report header identifies the input", "[report]")
{
    auto p = corpus_presentation("cp1-ring");
    Json h = report_header("validate", p);
    CHECK(h["command"] == "validate");
    CHECK(h["input"]["name"] == "cp1-ring");
    CHECK(h["input"]["hash"].get<std::string>().size() == 16);
    CHECK(input_hash(p) == input_hash(parse_presentation(serialize(p), "again")));
    CHECK(input_hash(p) != input_hash(corpus_presentation("cp2-ring")));
}

TEST_CASE("central-model specs", "[report]")
{
    auto corpus_ref = hodge_input_from_json(Json("corpus:central-n3-special"));
    CHECK(corpus_ref.name == "central-n3-special");
    CHECK(corpus_ref.special.has_value());

    auto h = hodge_input_from_json(Json::parse(R"J({"name": "q", "n": 3,
        "primitives": [{"bidegree": "(2,1)", "dim": 2}, {"bidegree": "(1,2)", "dim": 2}]})J"));
    auto expected = central_n3_input(false);
    CHECK(h.n == 3);
    CHECK(h.primitive_dims == expected.primitive_dims);
    CHECK_FALSE(h.special.has_value());

    auto s = hodge_input_from_json(Json::parse(R"J({"n": 3,
        "primitives": [{"bidegree": "(2,1)", "dim": 1}, {"bidegree": "(1,2)", "dim": 1}],
        "special": {"m": 1, "a": "1/2", "b": 3}})J"));
    REQUIRE(s.special);
    CHECK(s.special->a == Scalar(1) / Scalar(2));
    CHECK(s.special->b == Scalar(3));

    CHECK(kind_of([] { hodge_input_from_json(Json::parse(R"J({"n": 3})J")); }) == ErrorKind::Syntax);
    CHECK(kind_of([] { hodge_input_from_json(Json("corpus:dot")); }) == ErrorKind::UnknownCorpusEntry);
}

TEST_CASE("lefschetz specs", "[report]")
{
    auto spec = lefschetz_spec_from_json(Json::parse(R"J({"n": 1, "b": "corpus:cp2-ring", "a": "corpus:cp1-ring",
        "restriction": {"u": "u", "x1": "x1", "x2": "0"}})J"));
    CHECK(spec.truncation == 4);
    CHECK(spec.input.n == 1);
    REQUIRE(spec.input.restriction.size() == 3);
    CHECK(spec.input.restriction[2].is_zero());
    CHECK(spec.input.b_model.map.model->top_degree() == 4);

    CHECK(kind_of([] {
              lefschetz_spec_from_json(Json::parse(R"J({"n": 1, "b": "corpus:cp2-ring", "a": "corpus:cp1-ring",
                  "restriction": {"u": "u", "x1": "x1"}})J"));
          }) == ErrorKind::RestrictionContractViolated);
    CHECK(kind_of([] {
              lefschetz_spec_from_json(Json::parse(R"J({"n": 1, "b": "corpus:cp2-ring", "a": "corpus:cp1-ring",
                  "restriction": {"u": "u", "x1": "x1", "x2": "0", "x9": "0"}})J"));
          }) == ErrorKind::RestrictionContractViolated);
    CHECK(kind_of([] {
              lefschetz_spec_from_json(Json::parse(R"J({"n": 1, "b": "corpus:cp1-model", "a": "corpus:cp1-ring",
                  "restriction": {}})J"));
          }) == ErrorKind::UnsupportedInput);
}

TEST_CASE("spec files resolve ring paths against their directory", "[report]")
{
    auto dir = std::filesystem::temp_directory_path() / "formality-spec-test";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "line.txt") << serialize(corpus_presentation("cp1-ring"));
    std::ofstream(dir / "spec.json")
        << R"J({"n": 1, "b": "corpus:cp2-ring", "a": "line.txt", "restriction": {"u": "u", "x1": "x1", "x2": "0"}})J";
    auto spec = lefschetz_spec_from_json(read_json_file((dir / "spec.json").string()), dir.string());
    CHECK(spec.input.a_ring->name() == "cp1-ring");

    std::ofstream(dir / "ref.json") << "corpus:central-n3-generic\n";
    CHECK(read_json_file((dir / "ref.json").string()) == Json("corpus:central-n3-generic"));
    CHECK(kind_of([&] { read_json_file((dir / "missing.json").string()); }) == ErrorKind::Syntax);
    std::filesystem::remove_all(dir);
}
