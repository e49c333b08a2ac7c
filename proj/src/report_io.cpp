#include "opcx/report_io.hpp"

#include <json.hpp>

#include <set>
#include <sstream>

namespace opcx::verify {

namespace {

using json = nlohmann::ordered_json;

json component_json(const ops::ComponentVerdict& rec) {
    json j;
    j["code"] = rec.code;
    j["r"] = rec.r;
    j["s"] = rec.s_count;
    j["aut_order"] = rec.aut_order;
    json dims = json::object();
    for (const auto& [deg, d] : rec.dims) dims[std::to_string(deg)] = d;
    j["dims"] = std::move(dims);
    json hom = json::object();
    std::set<int> degs;
    for (const auto& [deg, d] : rec.dims) degs.insert(deg);
    for (int deg : rec.homology.degrees()) degs.insert(deg);
    for (int deg : degs) {
        json h;
        h["free"] = rec.homology.free_rank(deg);
        json tor = json::array();
        for (const auto& t : rec.homology.torsion(deg)) tor.push_back(t.get_str());
        h["torsion"] = std::move(tor);
        hom[std::to_string(deg)] = std::move(h);
    }
    j["homology"] = std::move(hom);
    j["acyclic"] = rec.acyclic;
    return j;
}

} // namespace

std::string report_json(const Report& report) {
    json j;
    j["scenario"] = report.scenario;
    json params;
    params["ring"] = report.params.ring.str();
    params["operad"] = report.params.operad;
    params["n"] = report.params.n;
    params["s"] = report.params.s;
    params["r_max"] = report.params.r_max;
    params["max_s"] = report.params.max_s;
    j["params"] = std::move(params);
    if (report.aut_all_trivial) j["aut_all_trivial"] = *report.aut_all_trivial;
    json comps = json::array();
    for (const auto& rec : report.components) comps.push_back(component_json(rec));
    j["components"] = std::move(comps);
    j["verdict"] = verdict_str(report.verdict);
    if (report.verdict == Verdict::NotQiso) {
        json w;
        w["r"] = report.witness_r;
        w["code"] = report.witness_code;
        j["witness"] = std::move(w);
    }
    if (report.verdict == Verdict::Unsupported) j["reason"] = report.unsupported_reason;
    return j.dump(2) + "\n";
}

std::string report_tsv(const Report& report) {
    std::ostringstream os;
    os << "# scenario\t" << report.scenario << "\n";
    os << "# params\tring=" << report.params.ring.str() << " operad=" << report.params.operad
       << " n=" << report.params.n << " s=" << report.params.s << " r_max=" << report.params.r_max
       << " max_s=" << report.params.max_s << "\n";
    if (report.aut_all_trivial)
        os << "# aut_all_trivial\t" << (*report.aut_all_trivial ? "yes" : "no") << "\n";
    os << "# verdict\t" << verdict_str(report.verdict) << "\n";
    if (report.verdict == Verdict::NotQiso)
        os << "# witness\tr=" << report.witness_r << " code=" << report.witness_code << "\n";
    if (report.verdict == Verdict::Unsupported)
        os << "# reason\t" << report.unsupported_reason << "\n";
    os << "code\tr\ts\taut_order\tdegree\tdim\tfree\ttorsion\n";
    for (const auto& rec : report.components) {
        std::set<int> degs;
        for (const auto& [deg, d] : rec.dims) degs.insert(deg);
        for (int deg : rec.homology.degrees()) degs.insert(deg);
        for (int deg : degs) {
            const auto it = rec.dims.find(deg);
            os << rec.code << "\t" << rec.r << "\t" << rec.s_count << "\t" << rec.aut_order << "\t"
               << deg << "\t" << (it == rec.dims.end() ? 0 : it->second) << "\t"
               << rec.homology.free_rank(deg) << "\t";
            const auto& tor = rec.homology.torsion(deg);
            if (tor.empty()) {
                os << "-";
            } else {
                for (std::size_t i = 0; i < tor.size(); ++i)
                    os << (i ? "," : "") << tor[i].get_str();
            }
            os << "\n";
        }
    }
    return os.str();
}

} // namespace opcx::verify
