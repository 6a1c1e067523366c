#include "formality/specs.hpp"

#include "formality/corpus.hpp"
#include "formality/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace formality {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::Syntax, "spec: " + what); }

const Json& need(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key))
        bad(std::string("missing field ") + key);
    return j.at(key);
}

int need_int(const Json& j, const char* key)
{
    const Json& v = need(j, key);
    if (!v.is_number_integer())
        bad(std::string("field ") + key + " must be an integer");
    return v.get<int>();
}

std::string need_text(const Json& j, const char* key)
{
    const Json& v = need(j, key);
    if (!v.is_string())
        bad(std::string("field ") + key + " must be a string");
    return v.get<std::string>();
}

Scalar scalar_field(const Json& j, const char* key, Scalar fallback)
{
    if (!j.contains(key))
        return fallback;
    const Json& v = j.at(key);
    if (v.is_number_integer())
        return Scalar(v.get<long>());
    if (v.is_string())
        return parse_scalar(v.get<std::string>());
    bad(std::string("field ") + key + " must be an integer or a scalar string");
}

std::shared_ptr<const FiniteCbba> ring(const std::string& ref)
{
    auto r = std::dynamic_pointer_cast<const FiniteCbba>(validate(load_presentation(ref)));
    if (!r || !r->has_product())
        throw Error(ErrorKind::UnsupportedInput, ref + " is not a finite-kind ring");
    return r;
}

}  // namespace

Presentation load_presentation(const std::string& ref)
{
    const std::string prefix = "corpus:";
    if (ref.rfind(prefix, 0) == 0)
        return corpus_presentation(ref.substr(prefix.size()));
    return parse_presentation_file(ref);
}

Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::Syntax, "cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text.compare(first, 7, "corpus:") == 0)
        return text.substr(first, text.find_last_not_of(" \t\r\n") - first + 1);
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorKind::Syntax, path + ": " + e.what());
    }
}

HodgeInput hodge_input_from_json(const Json& j)
{
    if (j.is_string()) {
        std::string ref = j.get<std::string>();
        if (ref == "corpus:central-n3-generic")
            return central_n3_input(false);
        if (ref == "corpus:central-n3-special")
            return central_n3_input(true);
        throw Error(ErrorKind::UnknownCorpusEntry, "no central-model corpus entry " + ref, ref);
    }
    HodgeInput h;
    h.name = j.contains("name") ? need_text(j, "name") : "central";
    h.n = need_int(j, "n");
    const Json& prims = need(j, "primitives");
    if (!prims.is_array())
        bad("primitives must be an array");
    for (const auto& p : prims) {
        int dim = need_int(p, "dim");
        if (dim < 0)
            bad("primitive dimensions must be non-negative");
        h.primitive_dims[parse_bidegree(need_text(p, "bidegree"))] += dim;
    }
    if (j.contains("special")) {
        const Json& s = j.at("special");
        HodgeInput::Special sp;
        sp.m = need_int(s, "m");
        sp.a = scalar_field(s, "a", Scalar(1));
        sp.b = scalar_field(s, "b", Scalar(0));
        h.special = sp;
    }
    return h;
}

LefschetzSpec lefschetz_spec_from_json(const Json& j, const std::string& base_dir)
{
    auto ring_ref = [&](const char* key) {
        std::string ref = need_text(j, key);
        if (ref.rfind("corpus:", 0) == 0 || base_dir.empty() || std::filesystem::path(ref).is_absolute())
            return ring(ref);
        return ring((std::filesystem::path(base_dir) / ref).string());
    };
    LefschetzSpec out;
    int n = need_int(j, "n");
    out.input.n = n;
    out.truncation = j.contains("truncation") ? need_int(j, "truncation") : 2 * n + 2;
    int b_truncation = j.contains("b_truncation") ? need_int(j, "b_truncation") : 2 * n + 2;
    auto b = ring_ref("b");
    out.input.a_ring = ring_ref("a");
    Presentation empty;
    empty.name = b->name() + "-model";
    out.input.b_model = complete_model(empty, {}, b, b_truncation);

    const Json& rho = need(j, "restriction");
    if (!rho.is_object())
        bad("restriction must be an object");
    for (const auto& [key, value] : rho.items()) {
        if (!b->presentation().index_of(key))
            throw Error(ErrorKind::RestrictionContractViolated, "restriction names an unknown basis symbol " + key, key);
        if (!value.is_string())
            bad("restriction values must be strings");
    }
    for (const auto& sym : b->presentation().symbols) {
        if (!rho.contains(sym.name))
            throw Error(ErrorKind::RestrictionContractViolated, "no restriction given for " + sym.name, sym.name);
        out.input.restriction.push_back(parse_element(*out.input.a_ring, rho.at(sym.name).get<std::string>()));
    }
    return out;
}

}  // namespace formality
