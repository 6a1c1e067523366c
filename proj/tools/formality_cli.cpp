#include "formality/corpus.hpp"
#include "formality/free_cbba.hpp"
#include "formality/io.hpp"
#include "formality/specs.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>

using namespace formality;

namespace {

// Exit codes: 0 verdict true / success, 1 verdict false with witness, 2 input or contract error.
constexpr int kTrue = 0;
constexpr int kFalse = 1;
constexpr int kError = 2;

struct Outcome {
    Json report;
    int code = kTrue;
};

std::shared_ptr<const FreeCbba> as_free(const BicomplexPtr& a)
{
    auto f = std::dynamic_pointer_cast<const FreeCbba>(a);
    if (!f)
        throw Error(ErrorKind::UnsupportedInput, "this command needs a free-kind algebra");
    return f;
}

std::shared_ptr<const FiniteCbba> as_ring(const BicomplexPtr& a)
{
    auto f = std::dynamic_pointer_cast<const FiniteCbba>(a);
    if (!f || !f->has_product())
        throw Error(ErrorKind::UnsupportedInput, "this command needs a finite-kind ring");
    return f;
}

Json error_json(const Error& e)
{
    Json j{{"kind", error_kind_name(e.kind())}, {"message", e.what()}};
    if (!e.witness().empty())
        j["witness"] = e.witness();
    return j;
}

struct Input {
    Presentation pres;
    BicomplexPtr algebra;
};

Input load(const std::string& ref)
{
    Input in{load_presentation(ref), nullptr};
    in.algebra = validate(in.pres);
    return in;
}

Outcome run_validate(const std::string& ref)
{
    auto in = load(ref);
    Outcome o{report_header("validate", in.pres)};
    o.report["valid"] = true;
    o.report["summary"] = summary_json(*in.algebra);
    return o;
}

Outcome run_cohomology(const std::string& ref, const std::vector<std::string>& kinds)
{
    auto in = load(ref);
    const Bicomplex& a = *in.algebra;
    Outcome o{report_header("cohomology", in.pres)};
    Json spaces = Json::array();
    for (const auto& name : kinds) {
        auto kind = parse_cohomology_kind(name);
        if (!kind)
            throw Error(ErrorKind::Syntax, "unknown cohomology kind " + name);
        int top = cohomology_limit(a, *kind);
        for (int t = 0; t <= top; ++t) {
            if (*kind == CohomologyKind::DeRham) {
                spaces.push_back(cohomology_json(a, de_rham(a, t)));
                continue;
            }
            for (Bidegree bd : a.slices(t))
                spaces.push_back(cohomology_json(a, cohomology(a, *kind, bd)));
        }
    }
    o.report["cohomology"] = spaces;
    return o;
}

Outcome run_zigzag(const std::string& ref)
{
    auto in = load(ref);
    Outcome o{report_header("zigzag", in.pres)};
    o.report["decomposition"] = zigzag_json(zigzag_decompose(*in.algebra));
    return o;
}

Outcome run_ddbar(const std::string& ref, std::optional<int> up_to)
{
    auto in = load(ref);
    const Bicomplex& a = *in.algebra;
    Outcome o{report_header("ddbar-check", in.pres)};
    auto v = up_to ? ddbar_check_up_to(a, *up_to) : ddbar_check_global(a);
    o.report["verdict"] = verdict_json(a, v);
    if (!up_to)
        o.report["bc_to_aeppli"] = iso_table_json(bc_to_a_iso_table(a));
    o.code = v.holds ? kTrue : kFalse;
    return o;
}

Outcome run_sd(const std::string& ref, int n)
{
    auto in = load(ref);
    const Bicomplex& a = *in.algebra;
    Outcome o{report_header("sd-check", in.pres)};
    auto p = pairing_check(a, n);
    o.report["pairing"] = pairing_json(a, p);
    o.code = p.holds ? kTrue : kFalse;
    if (p.holds) {
        try {
            auto v = sd_promotion_check(a, n);
            o.report["promotion"] = verdict_json(a, v);
            if (!v.holds)
                o.code = kFalse;
        } catch (const Error& e) {
            o.report["promotion"] = {{"skipped", error_json(e)}};
        }
    }
    return o;
}

Outcome run_split(const std::string& ref, bool search, const std::string& cert_path, std::optional<int> s)
{
    auto in = load(ref);
    auto a = as_free(in.algebra);
    Outcome o{report_header(search ? "split --search" : "split --verify", in.pres)};
    if (search) {
        if (!s)
            throw Error(ErrorKind::PreconditionFailed, "split --search needs --s");
        try {
            o.report["certificate"] = certificate_json(*a, split_search(*a, *s));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::SplittingObstructed)
                throw;
            o.report["obstructed"] = error_json(e);
            o.code = kFalse;
        }
        return o;
    }
    auto cert = certificate_from_json(*a, read_json_file(cert_path));
    int scope = s.value_or(cert.s);
    auto rep = split_verify(*a, cert, scope);
    o.report["scope"] = scope;
    o.report["verify"] = verify_json(*a, rep);
    o.code = rep.passed ? kTrue : kFalse;
    return o;
}

Outcome run_s_strong(const std::string& ref, int s)
{
    auto in = load(ref);
    auto a = as_free(in.algebra);
    Outcome o{report_header("s-strong", in.pres)};
    auto r = s_strong_check(*a, s);
    o.report["s"] = s;
    o.report["result"] = s_strong_json(*a, r);
    o.code = r.holds ? kTrue : kFalse;
    return o;
}

Json promotion_json(const FreeCbba& a, const SplittingCertificate& cert, const PromotionLog& log, int n)
{
    return {{"certificate", certificate_json(a, cert)},
            {"log", {{"steps", log.steps.size()}, {"eta_rewrites", log.eta_rewrites}, {"snapshot_checks", log.snapshot_checks}}},
            {"verify", verify_json(a, split_verify(a, cert, 2 * n))}};
}

Outcome run_promote(const std::string& ref, int n)
{
    auto in = load(ref);
    auto a = as_free(in.algebra);
    Outcome o{report_header("promote", in.pres)};
    PromotionLog log;
    try {
        auto cert = promote(*a, n, &log);
        o.report["promotion"] = promotion_json(*a, cert, log, n);
        if (!o.report["promotion"]["verify"]["passed"].get<bool>())
            o.code = kFalse;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::PromotionObstructed)
            throw;
        o.report["obstructed"] = error_json(e);
        o.code = kFalse;
    }
    return o;
}

Outcome run_central(const std::string& spec)
{
    auto h = hodge_input_from_json(read_json_file(spec));
    auto built = central_model(h);
    const auto& m = *built.completed.map.model;
    Outcome o{report_header("central-model", m.presentation())};
    auto strong = s_strong_check(m, h.n - 1);
    o.report["completion"] = completion_json(built.completed.report);
    o.report["certificate"] = certificate_json(m, built.certificate);
    o.report["verify"] = verify_json(m, split_verify(m, built.certificate, h.n - 1));
    o.report["s_strong"] = {{"s", h.n - 1}, {"holds", strong.holds}};
    o.report["model"] = serialize(m.presentation());
    o.code = strong.holds ? kTrue : kFalse;
    return o;
}

Outcome run_relations(const std::string& ref, int n, bool build)
{
    auto in = load(ref);
    auto h = as_ring(in.algebra);
    Outcome o{report_header("relations-check", in.pres)};
    auto r = relations_injectivity_check(h, n);
    o.report["relations"] = relations_json(r);
    o.code = r.holds ? kTrue : kFalse;
    if (build && r.holds) {
        auto built = relations_model(h, n);
        const auto& m = *built.completed.map.model;
        PromotionLog log;
        auto cert = promote(m, n, &log);
        o.report["completion"] = completion_json(built.completed.report);
        o.report["promotion"] = promotion_json(m, cert, log, n);
        o.report["model"] = serialize(m.presentation());
    }
    return o;
}

Outcome run_lefschetz(const std::string& spec)
{
    auto ls = lefschetz_spec_from_json(read_json_file(spec), std::filesystem::path(spec).parent_path().string());
    auto r = lefschetz_extend(ls.input, ls.truncation);
    const auto& m = *r.completed.map.model;
    Outcome o{report_header("lefschetz-extend", m.presentation())};
    auto rep = split_verify(m, r.certificate, 2 * ls.input.n);
    o.report["h_generators"] = r.h_generators;
    o.report["k_generators"] = r.k_generators;
    o.report["snapshot_checks"] = r.snapshot_checks;
    o.report["completion"] = completion_json(r.completed.report);
    o.report["certificate"] = certificate_json(m, r.certificate);
    o.report["verify"] = verify_json(m, rep);
    o.report["model"] = serialize(m.presentation());
    o.code = rep.passed ? kTrue : kFalse;
    return o;
}

Outcome run_corpus_list()
{
    Outcome o;
    o.report = {{"tool", "formality"}, {"version", FORMALITY_VERSION}, {"command", "corpus list"}};
    Json entries = Json::array();
    for (const auto& e : corpus())
        entries.push_back({{"name", e.name}, {"summary", e.summary}});
    o.report["entries"] = entries;
    return o;
}

Outcome run_corpus(const std::string& name)
{
    auto in = load("corpus:" + name);
    const Bicomplex& a = *in.algebra;
    Outcome o{report_header("corpus run", in.pres)};
    o.report["summary"] = summary_json(a);
    auto v = ddbar_check_global(a);
    o.report["ddbar"] = verdict_json(a, v);
    o.report["bc_to_aeppli"] = iso_table_json(bc_to_a_iso_table(a));
    if (auto n = a.sd_target())
        o.report["pairing"] = pairing_json(a, pairing_check(a, *n));
    o.code = v.holds ? kTrue : kFalse;
    return o;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact checks of strong formality for bigraded algebras"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string out_path;
    app.add_option("--out", out_path, "Write the report to PATH instead of standard output");

    std::function<Outcome()> job;
    std::string input;
    auto with_input = [&](CLI::App* sub) {
        sub->add_option("input", input, "Presentation file or corpus:NAME")->required();
        return sub;
    };

    auto* validate_cmd = with_input(app.add_subcommand("validate", "Parse and validate an algebra"));
    validate_cmd->callback([&] { job = [&] { return run_validate(input); }; });

    std::vector<std::string> kinds{"bott-chern", "aeppli"};
    auto* coh = with_input(app.add_subcommand("cohomology", "Cohomology dimensions and representatives"));
    coh->add_option("--kind", kinds, "bott-chern, aeppli, dolbeault, anti-dolbeault, de-rham");
    coh->callback([&] { job = [&] { return run_cohomology(input, kinds); }; });

    auto* zz = with_input(app.add_subcommand("zigzag", "Zigzag decomposition of a finite bicomplex"));
    zz->callback([&] { job = [&] { return run_zigzag(input); }; });

    std::optional<int> up_to;
    auto* dd = with_input(app.add_subcommand("ddbar-check", "∂∂̄-Lemma, globally or up to a degree"));
    dd->add_option("--up-to", up_to, "Check the lemma up to degree s (free kind)");
    dd->callback([&] { job = [&] { return run_ddbar(input, up_to); }; });

    int n = 0;
    auto* sd = with_input(app.add_subcommand("sd-check", "n-Serre duality and the promotion of the lemma"));
    sd->add_option("--n", n, "Dimension n")->required();
    sd->callback([&] { job = [&] { return run_sd(input, n); }; });

    bool search = false;
    std::string cert_path;
    std::optional<int> s;
    auto* split = with_input(app.add_subcommand("split", "Search or verify a splitting certificate"));
    auto* search_flag = split->add_flag("--search", search, "Search for a certificate");
    auto* verify_opt = split->add_option("--verify", cert_path, "Verify the certificate in CERT");
    search_flag->excludes(verify_opt);
    split->add_option("--s", s, "Degree s");
    split->callback([&] {
        if (!search && cert_path.empty())
            throw CLI::ValidationError("split", "one of --search or --verify CERT is required");
        job = [&] { return run_split(input, search, cert_path, s); };
    });

    int s_value = 0;
    auto* strong = with_input(app.add_subcommand("s-strong", "s-strong formality check"));
    strong->add_option("--s", s_value, "Degree s")->required();
    strong->callback([&] { job = [&] { return run_s_strong(input, s_value); }; });

    auto* prom = with_input(app.add_subcommand("promote", "Promote to a strong formality certificate"));
    prom->add_option("--n", n, "Dimension n")->required();
    prom->callback([&] { job = [&] { return run_promote(input, n); }; });

    std::string spec;
    auto* central = app.add_subcommand("central-model", "Build the central-cohomology model from SPEC");
    central->add_option("spec", spec, "JSON spec file")->required();
    central->callback([&] { job = [&] { return run_central(spec); }; });

    bool build = false;
    auto* rel = with_input(app.add_subcommand("relations-check", "Multiplicative relations below degree n+2"));
    rel->add_option("--n", n, "Dimension n")->required();
    rel->add_flag("--build", build, "Also build the model and promote it");
    rel->callback([&] { job = [&] { return run_relations(input, n, build); }; });

    auto* lef = app.add_subcommand("lefschetz-extend", "Extend a model along a restriction from SPEC");
    lef->add_option("spec", spec, "JSON spec file")->required();
    lef->callback([&] { job = [&] { return run_lefschetz(spec); }; });

    auto* corp = app.add_subcommand("corpus", "Built-in examples");
    corp->require_subcommand(1);
    corp->add_subcommand("list", "List the entries")->callback([&] { job = [] { return run_corpus_list(); }; });
    std::string entry;
    auto* corp_run = corp->add_subcommand("run", "Run the standard checks on an entry");
    corp_run->add_option("name", entry, "Entry name")->required();
    corp_run->callback([&] { job = [&] { return run_corpus(entry); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kTrue : kError;
    }

    Outcome outcome;
    try {
        outcome = job();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << (e.witness().empty() ? "" : " (witness " + e.witness() + ")") << "\n";
        outcome.report = {{"tool", "formality"}, {"version", FORMALITY_VERSION}, {"error", error_json(e)}};
        outcome.code = kError;
    }

    std::string text = dump(outcome.report);
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!(out << text)) {
            std::cerr << "error: cannot write " << out_path << "\n";
            return kError;
        }
    }
    return outcome.code;
}
