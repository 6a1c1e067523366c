#include "formality/report.hpp"

#include "formality/free_cbba.hpp"
#include "formality/io.hpp"

#include <cstdio>

namespace formality {

namespace {

Json element(const Bicomplex& a, const Element& e) { return to_string(a, e); }

Json element(const Bicomplex& a, const std::optional<Element>& e)
{
    return e ? Json(to_string(a, *e)) : Json(nullptr);
}

Json bidegree(const std::optional<Bidegree>& bd) { return bd ? Json(bd->to_string()) : Json(nullptr); }

Json dims(const std::map<Bidegree, std::size_t>& m)
{
    Json j = Json::object();
    for (const auto& [bd, d] : m)
        j[bd.to_string()] = d;
    return j;
}

Json generators(const FreeCbba& a, const std::map<Bidegree, std::vector<SplitGenerator>>& basis)
{
    Json out = Json::array();
    for (const auto& [bd, gens] : basis)
        for (const auto& g : gens)
            out.push_back({{"bidegree", bd.to_string()},
                           {"linear", to_string(a, g.linear)},
                           {"subtrahend", to_string(a, g.subtrahend)}});
    return out;
}

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorKind::Syntax, "certificate: " + what); }

const Json& field(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key))
        malformed(std::string("missing field ") + key);
    return j.at(key);
}

std::string text_field(const Json& j, const char* key)
{
    const Json& v = field(j, key);
    if (!v.is_string())
        malformed(std::string("field ") + key + " must be a string");
    return v.get<std::string>();
}

int int_field(const Json& j, const char* key)
{
    const Json& v = field(j, key);
    if (!v.is_number_integer())
        malformed(std::string("field ") + key + " must be an integer");
    return v.get<int>();
}

}  // namespace

std::string input_hash(const Presentation& p)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : serialize(p)) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Json report_header(const std::string& command, const Presentation& input)
{
    return {{"tool", "formality"},
            {"version", FORMALITY_VERSION},
            {"command", command},
            {"input", {{"name", input.name}, {"kind", input.kind == AlgebraKind::Free ? "free" : "finite"},
                       {"hash", input_hash(input)}}}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json summary_json(const Bicomplex& a)
{
    Json j;
    j["kind"] = a.kind() == AlgebraKind::Free ? "free" : "finite";
    j["top_degree"] = a.top_degree();
    if (auto n = a.sd_target())
        j["sd_target"] = *n;
    j["has_product"] = a.has_product();
    if (const auto* f = dynamic_cast<const FreeCbba*>(&a)) {
        j["generators"] = f->num_generators();
        j["minimal"] = f->minimal();
    }
    std::map<Bidegree, std::size_t> d;
    for (int t = 0; t <= a.top_degree(); ++t)
        for (Bidegree bd : a.slices(t))
            d[bd] = a.dim(bd);
    j["dims"] = dims(d);
    return j;
}

Json verdict_json(const Bicomplex& a, const DdbarVerdict& v)
{
    Json j;
    j["scope"] = v.up_to ? Json(*v.up_to) : Json("global");
    j["holds"] = v.holds;
    j["complete"] = v.complete;
    j["checked_through"] = v.checked_through;
    j["failing_degree"] = v.failing ? Json(*v.failing) : Json(nullptr);
    j["witness"] = element(a, v.witness);
    Json rows = Json::array();
    for (const auto& r : v.rows)
        rows.push_back({{"total", r.total},
                        {"status", ddbar_status_name(r.status)},
                        {"exact_closed_dim", r.exact_closed_dim},
                        {"defect", r.defect}});
    j["rows"] = rows;
    if (!v.notes.empty())
        j["notes"] = v.notes;
    return j;
}

Json iso_table_json(const std::vector<IsoRow>& rows)
{
    Json out = Json::array();
    for (const auto& r : rows)
        out.push_back({{"bidegree", r.bd.to_string()},
                       {"bc", r.bc_dim},
                       {"aeppli", r.a_dim},
                       {"rank", r.rank},
                       {"iso", r.iso()}});
    return out;
}

Json cohomology_json(const Bicomplex& a, const CohomologySpace& h)
{
    Json reps = Json::array();
    for (const auto& r : h.representatives)
        reps.push_back(to_string(a, r));
    return {{"kind", cohomology_kind_name(h.kind)},
            {"bidegree", h.kind == CohomologyKind::DeRham ? Json(h.total) : Json(h.bd.to_string())},
            {"dim", h.dim()},
            {"representatives", reps}};
}

Json zigzag_json(const ZigzagDecomposition& z)
{
    Json shapes = Json::array();
    for (const auto& s : z.shapes)
        shapes.push_back(s.describe());
    return {{"only_dots_and_squares", z.only_dots_and_squares()},
            {"shapes", shapes},
            {"predicted_bc", dims(z.predicted_bc())},
            {"predicted_aeppli", dims(z.predicted_aeppli())}};
}

Json pairing_json(const Bicomplex& a, const PairingReport& r)
{
    Json j;
    j["n"] = r.n;
    j["holds"] = r.holds;
    if (!r.holds) {
        j["failure"] = r.failure;
        j["failing"] = bidegree(r.failing);
        j["witness"] = r.witness;
    }
    j["omega"] = element(a, r.omega);
    Json blocks = Json::array();
    for (const auto& b : r.blocks) {
        Json m = Json::array();
        for (const auto& row : b.matrix) {
            Json jr = Json::array();
            for (const auto& c : row)
                jr.push_back(c.to_string());
            m.push_back(jr);
        }
        blocks.push_back({{"bc", b.bc.to_string()}, {"rows", b.rows}, {"cols", b.cols}, {"perfect", b.perfect}, {"matrix", m}});
    }
    j["blocks"] = blocks;
    return j;
}

Json certificate_json(const FreeCbba& a, const SplittingCertificate& cert)
{
    Json ws = Json::array();
    for (const auto& w : cert.witnesses) {
        Json jw{{"kind", w.kind == IdealWitness::Kind::DdbarPrimitive ? "ddbar-primitive" : "del-delbar-split"},
                {"bidegree", w.bd.to_string()},
                {"element", to_string(a, w.element)}};
        if (w.kind == IdealWitness::Kind::DdbarPrimitive) {
            jw["primitive"] = to_string(a, w.primitive);
        } else {
            jw["alpha"] = to_string(a, w.alpha);
            jw["beta"] = to_string(a, w.beta);
        }
        ws.push_back(jw);
    }
    return {{"algebra", cert.algebra},
            {"s", cert.s},
            {"global_to_2n", cert.global_to_2n},
            {"ideal_checked_through", cert.ideal_checked_through},
            {"c", generators(a, cert.c_basis)},
            {"n", generators(a, cert.n_basis)},
            {"witnesses", ws}};
}

Bidegree parse_bidegree(const std::string& text)
{
    int p = 0, q = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), " (%d ,%d )%c", &p, &q, &tail) != 2 || p < 0 || q < 0)
        throw Error(ErrorKind::Syntax, "malformed bidegree " + text);
    return {p, q};
}

SplittingCertificate certificate_from_json(const FreeCbba& a, const Json& j)
{
    // Whole reports are accepted: the certificate may sit under "certificate"
    // or "promotion"/"certificate".
    if (j.is_object() && j.contains("certificate"))
        return certificate_from_json(a, j.at("certificate"));
    if (j.is_object() && j.contains("promotion"))
        return certificate_from_json(a, j.at("promotion"));
    SplittingCertificate cert;
    cert.algebra = text_field(j, "algebra");
    cert.s = int_field(j, "s");
    const Json& g2n = field(j, "global_to_2n");
    if (!g2n.is_boolean())
        malformed("field global_to_2n must be a boolean");
    cert.global_to_2n = g2n.get<bool>();
    cert.ideal_checked_through = int_field(j, "ideal_checked_through");
    for (auto [key, basis] : {std::pair{"c", &cert.c_basis}, std::pair{"n", &cert.n_basis}}) {
        const Json& list = field(j, key);
        if (!list.is_array())
            malformed(std::string("field ") + key + " must be an array");
        for (const auto& g : list) {
            Bidegree bd = parse_bidegree(text_field(g, "bidegree"));
            (*basis)[bd].push_back({parse_element(a, text_field(g, "linear")), parse_element(a, text_field(g, "subtrahend"))});
        }
    }
    const Json& ws = field(j, "witnesses");
    if (!ws.is_array())
        malformed("field witnesses must be an array");
    for (const auto& w : ws) {
        IdealWitness out;
        std::string kind = text_field(w, "kind");
        out.bd = parse_bidegree(text_field(w, "bidegree"));
        out.element = parse_element(a, text_field(w, "element"));
        if (kind == "ddbar-primitive") {
            out.kind = IdealWitness::Kind::DdbarPrimitive;
            out.primitive = parse_element(a, text_field(w, "primitive"));
        } else if (kind == "del-delbar-split") {
            out.kind = IdealWitness::Kind::DelDelbarSplit;
            out.alpha = parse_element(a, text_field(w, "alpha"));
            out.beta = parse_element(a, text_field(w, "beta"));
        } else {
            malformed("unknown witness kind " + kind);
        }
        cert.witnesses.push_back(std::move(out));
    }
    return cert;
}

Json verify_json(const FreeCbba& a, const VerifyReport& r)
{
    return {{"passed", r.passed},
            {"failures", r.failures},
            {"failing", bidegree(r.failing)},
            {"witness", element(a, r.witness)},
            {"bidegrees_checked", r.bidegrees_checked},
            {"witnesses_checked", r.witnesses_checked},
            {"lemma_holds", r.lemma_holds},
            {"remark_checks", r.remark_checks},
            {"remark_violations", r.remark_violations}};
}

Json psi_json(const FreeCbba& a, const PsiMorphism& psi)
{
    Json images = Json::object();
    for (const auto& [g, e] : psi.generator_image)
        images[a.generator_symbol(g).name] = to_string(a, e);
    Json rows = Json::array();
    for (const auto& r : psi.induced) {
        Json jr{{"bidegree", r.bd.to_string()},
                {"bc_source", r.bc_source},
                {"bc_rank", r.bc_rank},
                {"bc_target", r.bc_target}};
        if (r.a_computed) {
            jr["a_source"] = r.a_source;
            jr["a_rank"] = r.a_rank;
            jr["a_target"] = r.a_target;
        }
        rows.push_back(jr);
    }
    return {{"s", psi.s},
            {"generator_images", images},
            {"spanning_elements", psi.spanning_elements},
            {"relations_checked", psi.relations_checked},
            {"differential_checks", psi.differential_checks},
            {"induced", rows}};
}

Json s_strong_json(const FreeCbba& a, const SStrongResult& r)
{
    Json j{{"holds", r.holds}, {"refuted", r.refuted}};
    if (!r.holds) {
        j["failure"] = r.failure;
        j["witness"] = element(a, r.witness);
    }
    if (r.lemma)
        j["lemma"] = verdict_json(a, *r.lemma);
    if (r.certificate)
        j["certificate"] = certificate_json(a, *r.certificate);
    return j;
}

Json completion_json(const CompletionReport& r)
{
    Json rows = Json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"bidegree", row.bd.to_string()},
                        {"model_bc", row.model_bc},
                        {"target_bc", row.target_bc},
                        {"model_aeppli", row.model_a},
                        {"target_aeppli", row.target_a},
                        {"bc_rank", row.bc_rank},
                        {"matches", row.matches()}});
    return {{"truncation", r.truncation},
            {"dims_match", r.dims_match()},
            {"closed_added", r.closed_added},
            {"triples_added", r.triples_added},
            {"gadgets_added", r.gadgets_added},
            {"rows", rows}};
}

Json relations_json(const RelationsReport& r)
{
    return {{"holds", r.holds},
            {"failing_degree", r.failing_degree ? Json(*r.failing_degree) : Json(nullptr)},
            {"failing_bidegree", bidegree(r.failing_bd)},
            {"kernel_dim", r.kernel_dim}};
}

}  // namespace formality
