/* opcx — exact homology of operad coproducts with a free operad, decomposed
 * over reduced marked trees.
 *
 * Exit codes: 0 = scenario confirmed, 1 = scenario contradicted at this
 * truncation, 2 = usage or precondition error.
 */

#include "opcx/collection_io.hpp"
#include "opcx/report_io.hpp"
#include "opcx/verifier.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace opcx;

struct UsageError : Error {
    using Error::Error;
};

void write_output(const std::string& content, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::filesystem::path path(out_path);
    if (path.is_relative()) {
        if (const char* dir = std::getenv("OPCX_OUT_DIR")) path = std::filesystem::path(dir) / path;
    }
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
}

exact::RingDesc parse_ring(const std::string& text) {
    try {
        return exact::RingDesc::parse(text);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

bool parse_yesno(const std::string& text, const char* flag) {
    if (text == "yes") return true;
    if (text == "no") return false;
    throw UsageError(std::string("--") + flag + " expects yes or no");
}

int emit_report(const verify::Report& report, const std::string& format,
                const std::string& out_path) {
    if (format == "json")
        write_output(verify::report_json(report), out_path);
    else if (format == "tsv")
        write_output(verify::report_tsv(report), out_path);
    else
        throw UsageError("unknown format: " + format);
    return 0;
}

int cmd_counterexample(const std::string& ring_text, int max_power, int s,
                       const std::string& format, const std::string& out_path) {
    const exact::RingDesc ring = parse_ring(ring_text);
    if (ring.kind() != exact::RingKind::PrimeField)
        throw UsageError("the counterexample scenario requires positive characteristic "
                         "(--ring Fp:<p>)");
    if (max_power < 0) throw UsageError("--max-power must be non-negative");
    const verify::Report report = verify::run_counterexample(ring.prime(), max_power, s);
    emit_report(report, format, out_path);
    return report.verdict == verify::Verdict::NotQiso ? 0 : 1;
}

int cmd_verify(const std::string& which_case, const std::string& operad, int n,
               const std::string& ring_text, int r_max, int max_s, int s,
               const std::string& format, const std::string& out_path) {
    verify::Report report;
    if (which_case == "i") {
        if (ring_text.empty()) throw UsageError("case i needs --ring");
        const exact::RingDesc ring = parse_ring(ring_text);
        try {
            report = verify::run_case_i(operad, n, ring, r_max, max_s, s);
        } catch (const UnsupportedRing&) {
            throw;
        } catch (const Error& e) {
            throw UsageError(e.what()); // precondition violations (O(0) != 0, n = 0)
        }
    } else if (which_case == "ii") {
        if (!ring_text.empty() && !(parse_ring(ring_text) == exact::RingDesc::rationals()))
            throw UsageError("case ii runs over Q; drop --ring or pass --ring Q");
        report = verify::run_case_ii(operad, n, r_max, max_s, s);
    } else {
        throw UsageError("--case must be i or ii");
    }
    emit_report(report, format, out_path);
    return report.verdict == verify::Verdict::QisoUpToTruncation ? 0 : 1;
}

int cmd_trees(int r, int n, int max_s, const std::string& nullary, const std::string& unary,
              bool render, const std::string& format, const std::string& out_path) {
    const trees::EnumFlags flags{parse_yesno(nullary, "nullary"), parse_yesno(unary, "unary")};
    const auto classes = trees::enumerate_reduced(r, n, max_s, flags);
    std::string content;
    if (format == "json") {
        nlohmann::ordered_json j;
        j["command"] = "trees";
        j["r"] = r;
        j["n"] = n;
        j["max_s"] = max_s;
        j["nullary"] = flags.allow_nullary;
        j["unary"] = flags.allow_unary;
        nlohmann::ordered_json counts = nlohmann::ordered_json::object();
        for (const auto& [s, reps] : classes) counts[std::to_string(s)] = reps.size();
        j["counts"] = std::move(counts);
        nlohmann::ordered_json list = nlohmann::ordered_json::array();
        for (const auto& [s, reps] : classes)
            for (const auto& rep : reps) {
                nlohmann::ordered_json t;
                t["s"] = s;
                t["code"] = trees::canonical_code(rep);
                t["aut_order"] = trees::automorphisms(rep).order;
                if (render) t["render"] = trees::render(rep);
                list.push_back(std::move(t));
            }
        j["trees"] = std::move(list);
        content = j.dump(2) + "\n";
    } else if (format == "tsv") {
        std::ostringstream os;
        os << "s\tcount\n";
        for (const auto& [s, reps] : classes) os << s << "\t" << reps.size() << "\n";
        if (render)
            for (const auto& [s, reps] : classes)
                for (const auto& rep : reps)
                    os << "# " << trees::canonical_code(rep) << "\n" << trees::render(rep);
        content = os.str();
    } else {
        throw UsageError("unknown format: " + format);
    }
    write_output(content, out_path);
    return 0;
}

int cmd_component(const std::string& code, const std::string& operad_name,
                  const std::string& operad_file, const std::string& ring_text, int n, int s,
                  int r, int max_s, const std::string& format, const std::string& out_path) {
    const exact::RingDesc ring = parse_ring(ring_text);
    const auto bound = trees::structural_bound(r, n, max_s, {true, true});
    const int max_arity = std::max({1, r, static_cast<int>(bound.max_valence)});
    const ops::SymmetricCollection o = operad_file.empty()
                                           ? ops::builtin_operad(operad_name, ring, max_arity)
                                           : ops::load_collection_file(operad_file);
    const ops::GeneratorCollection gen = ops::make_generator_collection(ring, n, s);
    const trees::EnumFlags flags{o.has_nullary(), o.has_reduced_unary()};
    const auto classes = trees::enumerate_reduced(r, n, max_s, flags);
    for (const auto& [sc, reps] : classes)
        for (const auto& rep : reps) {
            if (trees::canonical_code(rep) != code) continue;
            const ops::TreeComponent part = ops::tree_component(o, gen, rep);
            const chain::HomologyProfile profile = chain::homology(part.component);
            if (format == "json") {
                nlohmann::ordered_json j;
                j["code"] = part.code;
                j["s"] = part.s_count;
                j["aut_order"] = part.aut_order;
                nlohmann::ordered_json dims = nlohmann::ordered_json::object();
                for (const auto& [deg, d] : part.component.dims()) dims[std::to_string(deg)] = d;
                j["dims"] = std::move(dims);
                nlohmann::ordered_json hom = nlohmann::ordered_json::object();
                for (const auto& [deg, d] : part.component.dims()) {
                    (void)d;
                    nlohmann::ordered_json h;
                    h["free"] = profile.free_rank(deg);
                    nlohmann::ordered_json tor = nlohmann::ordered_json::array();
                    for (const auto& t : profile.torsion(deg)) tor.push_back(t.get_str());
                    h["torsion"] = std::move(tor);
                    hom[std::to_string(deg)] = std::move(h);
                }
                j["homology"] = std::move(hom);
                j["acyclic"] = profile.is_zero();
                write_output(j.dump(2) + "\n", out_path);
            } else if (format == "tsv") {
                std::ostringstream os;
                os << "degree\tdim\tfree\ttorsion\n";
                for (const auto& [deg, d] : part.component.dims()) {
                    os << deg << "\t" << d << "\t" << profile.free_rank(deg) << "\t";
                    const auto& tor = profile.torsion(deg);
                    if (tor.empty())
                        os << "-";
                    else
                        for (std::size_t i = 0; i < tor.size(); ++i)
                            os << (i ? "," : "") << tor[i].get_str();
                    os << "\n";
                }
                write_output(os.str(), out_path);
            } else {
                throw UsageError("unknown format: " + format);
            }
            return 0;
        }
    throw UsageError("no enumerated class has code " + code);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact homology of operad coproducts over reduced marked trees"};
    app.require_subcommand(1);

    std::string ring_text, format = "json", out_path, operad, which_case, code, operad_file;
    std::string nullary = "yes", unary = "no";
    int max_power = 0, s = 0, n = 0, r = 0, r_max = 0, max_s = 0;
    bool render = false;

    auto* cx = app.add_subcommand("counterexample",
                                  "join a contractible M to COM over F_p and watch homology appear");
    cx->add_option("--ring", ring_text, "coefficient ring, Fp:<p>")->required();
    cx->add_option("--max-power", max_power, "truncation |S| <= max-power")->required();
    cx->add_option("--s", s, "shift of M = cone(id)[s]");
    cx->add_option("--format", format, "json or tsv");
    cx->add_option("--out", out_path, "output path (default: stdout)");

    auto* vf = app.add_subcommand("verify", "check the corrected statement, case i or ii");
    vf->add_option("--case", which_case, "i (O(0)=0, n>0) or ii (over Q)")->required();
    vf->add_option("--operad", operad, "unit, com, com-nonunital or assoc-nonunital")->required();
    vf->add_option("--n", n, "arity of the generating collection")->required();
    vf->add_option("--ring", ring_text, "coefficient ring (case i)");
    vf->add_option("--r-max", r_max, "check arities r = 0..r-max")->required();
    vf->add_option("--max-s", max_s, "truncation |S| <= max-s")->required();
    vf->add_option("--s", s, "shift of M = cone(id)[s]");
    vf->add_option("--format", format, "json or tsv");
    vf->add_option("--out", out_path, "output path (default: stdout)");

    auto* tr = app.add_subcommand("trees", "enumerate reduced marked tree classes");
    tr->add_option("--r", r, "number of argument slots")->required();
    tr->add_option("--n", n, "valence of S-vertices")->required();
    tr->add_option("--max-s", max_s, "enumerate |S| <= max-s")->required();
    tr->add_option("--nullary", nullary, "allow unmarked leaves (yes/no)")->required();
    tr->add_option("--unary", unary, "allow unmarked valence-1 vertices (yes/no)")->required();
    tr->add_flag("--render", render, "include indented tree renderings");
    tr->add_option("--format", format, "json or tsv");
    tr->add_option("--out", out_path, "output path (default: stdout)");

    auto* cp = app.add_subcommand("component", "dims and homology of one tree component");
    cp->add_option("--code", code, "canonical code of the class")->required();
    cp->add_option("--operad", operad, "builtin operad name");
    cp->add_option("--operad-file", operad_file, "collection description file");
    cp->add_option("--ring", ring_text, "coefficient ring")->required();
    cp->add_option("--n", n, "arity of the generating collection")->required();
    cp->add_option("--s", s, "shift of M = cone(id)[s]");
    cp->add_option("--r", r, "coproduct arity")->required();
    cp->add_option("--max-s", max_s, "enumeration truncation")->required();
    cp->add_option("--format", format, "json or tsv");
    cp->add_option("--out", out_path, "output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    try {
        if (cx->parsed()) return cmd_counterexample(ring_text, max_power, s, format, out_path);
        if (vf->parsed())
            return cmd_verify(which_case, operad, n, ring_text, r_max, max_s, s, format, out_path);
        if (tr->parsed()) return cmd_trees(r, n, max_s, nullary, unary, render, format, out_path);
        if (cp->parsed()) {
            if (operad.empty() && operad_file.empty())
                throw UsageError("component needs --operad or --operad-file");
            return cmd_component(code, operad, operad_file, ring_text, n, s, r, max_s, format,
                                 out_path);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
