#include "opcx/collection_io.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace opcx::ops {

using exact::ExactMatrix;
using exact::RingDesc;
using exact::Scalar;

namespace {

struct ArityBlock {
    // declaration order matters: it fixes the basis order within each degree
    std::vector<std::pair<std::string, int>> gens; // label, degree
    std::vector<std::tuple<std::string, std::string, std::string>> diffs;
    std::vector<std::tuple<int, std::string, std::string, std::string>> acts;
    std::string unit;
};

std::vector<std::string> tokens(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> out;
    std::string t;
    while (is >> t) {
        if (t[0] == '#') break;
        out.push_back(t);
    }
    return out;
}

} // namespace

SymmetricCollection load_collection(std::istream& in) {
    bool have_ring = false;
    RingDesc ring = RingDesc::rationals();
    int max_arity = -1;
    std::map<int, ArityBlock> blocks;
    int current = -1;
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) -> Error {
        return Error("collection file, line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = tokens(line);
        if (t.empty()) continue;
        if (t[0] == "ring") {
            if (t.size() == 2 && t[1] == "Q")
                ring = RingDesc::rationals();
            else if (t.size() == 2 && t[1] == "Z")
                ring = RingDesc::integers();
            else if (t.size() == 3 && t[1] == "Fp")
                ring = RingDesc::prime_field(std::stoul(t[2]));
            else
                throw fail("bad ring line");
            have_ring = true;
        } else if (t[0] == "max-arity") {
            if (t.size() != 2) throw fail("bad max-arity line");
            max_arity = std::stoi(t[1]);
        } else if (t[0] == "arity") {
            if (t.size() != 2) throw fail("bad arity line");
            current = std::stoi(t[1]);
            blocks[current]; // create
        } else if (t[0] == "gen") {
            if (current < 0) throw fail("gen outside an arity block");
            if (t.size() != 3) throw fail("bad gen line");
            blocks[current].gens.emplace_back(t[1], std::stoi(t[2]));
        } else if (t[0] == "diff") {
            if (current < 0) throw fail("diff outside an arity block");
            if (t.size() != 4) throw fail("bad diff line");
            blocks[current].diffs.emplace_back(t[1], t[2], t[3]);
        } else if (t[0] == "act") {
            if (current < 0) throw fail("act outside an arity block");
            if (t.size() != 5) throw fail("bad act line");
            blocks[current].acts.emplace_back(std::stoi(t[1]), t[2], t[3], t[4]);
        } else if (t[0] == "unit") {
            if (current != 1) throw fail("unit outside the arity-1 block");
            if (t.size() != 2) throw fail("bad unit line");
            blocks[current].unit = t[1];
        } else {
            throw fail("unknown directive '" + t[0] + "'");
        }
    }
    if (!have_ring) throw Error("collection file: missing ring line");
    if (max_arity < 1) throw Error("collection file: missing or bad max-arity line");

    std::map<int, chain::Complex> components;
    std::map<int, std::vector<chain::ChainMap>> actions;
    std::string unit_label;
    for (const auto& [arity, block] : blocks) {
        std::map<int, std::vector<std::string>> basis;
        std::map<std::string, std::pair<int, std::size_t>> where;
        for (const auto& [label, deg] : block.gens) {
            if (where.count(label))
                throw Error("collection file: duplicate generator '" + label + "' in arity " +
                            std::to_string(arity));
            where[label] = {deg, basis[deg].size()};
            basis[deg].push_back(label);
        }
        auto locate = [&](const std::string& label) {
            auto it = where.find(label);
            if (it == where.end())
                throw Error("collection file: unknown label '" + label + "' in arity " +
                            std::to_string(arity));
            return it->second;
        };
        std::map<int, ExactMatrix> diffs;
        for (const auto& [src, dst, sc] : block.diffs) {
            const auto [sdeg, sidx] = locate(src);
            const auto [tdeg, tidx] = locate(dst);
            if (tdeg != sdeg - 1)
                throw Error("collection file: diff " + src + " -> " + dst +
                            " does not lower degree by one");
            auto it = diffs.find(sdeg);
            if (it == diffs.end())
                it = diffs
                         .emplace(sdeg, ExactMatrix(ring, basis.count(tdeg) ? basis[tdeg].size() : 0,
                                                    basis[sdeg].size()))
                         .first;
            it->second.add_at(tidx, sidx, Scalar::parse(ring, sc));
        }
        chain::Complex c = chain::Complex::make(ring, basis, std::move(diffs));
        if (!block.acts.empty()) {
            std::map<int, std::map<int, ExactMatrix>> gen_comps; // k -> degree -> matrix
            for (const auto& [k, src, dst, sc] : block.acts) {
                if (k < 1 || k >= arity)
                    throw Error("collection file: act index out of range in arity " +
                                std::to_string(arity));
                const auto [sdeg, sidx] = locate(src);
                const auto [tdeg, tidx] = locate(dst);
                if (sdeg != tdeg)
                    throw Error("collection file: act does not preserve degree");
                auto& comps = gen_comps[k];
                auto it = comps.find(sdeg);
                if (it == comps.end())
                    it = comps.emplace(sdeg, ExactMatrix(ring, basis[sdeg].size(), basis[sdeg].size()))
                             .first;
                const Scalar s = Scalar::parse(ring, sc);
                if (!(s == Scalar::one(ring)) && !(s == -Scalar::one(ring)))
                    throw Error("collection file: act sign must be 1 or -1");
                it->second.set(tidx, sidx, s);
            }
            std::vector<chain::ChainMap> gens;
            for (int k = 1; k < arity; ++k) {
                auto it = gen_comps.find(k);
                if (it == gen_comps.end())
                    throw Error("collection file: arity " + std::to_string(arity) +
                                " is missing action generator " + std::to_string(k));
                gens.push_back(chain::ChainMap::make(c, c, std::move(it->second)));
            }
            actions.emplace(arity, std::move(gens));
        }
        if (arity == 1) {
            if (block.unit.empty()) throw Error("collection file: arity 1 has no unit designation");
            unit_label = block.unit;
        }
        components.emplace(arity, std::move(c));
    }
    return SymmetricCollection::make(ring, max_arity, std::move(components), std::move(actions),
                                     unit_label);
}

SymmetricCollection load_collection_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open collection file: " + path);
    return load_collection(in);
}

std::string save_collection(const SymmetricCollection& o) {
    std::ostringstream os;
    const RingDesc ring = o.ring();
    switch (ring.kind()) {
        case exact::RingKind::Rationals: os << "ring Q\n"; break;
        case exact::RingKind::PrimeField: os << "ring Fp " << ring.prime() << "\n"; break;
        case exact::RingKind::Integers: os << "ring Z\n"; break;
    }
    os << "max-arity " << o.max_arity() << "\n";
    for (int m = 0; m <= o.max_arity(); ++m) {
        const chain::Complex& c = o.component(m);
        if (c.is_zero_complex()) continue;
        os << "arity " << m << "\n";
        if (m == 1) os << "unit " << o.unit_label() << "\n";
        for (int deg : c.degrees())
            for (const auto& label : c.labels(deg)) os << "gen " << label << " " << deg << "\n";
        for (int deg : c.degrees()) {
            const ExactMatrix d = c.differential(deg);
            for (const auto& [pos, s] : d.entries())
                os << "diff " << c.labels(deg)[pos.second] << " " << c.labels(deg - 1)[pos.first]
                   << " " << s.str() << "\n";
        }
        const auto& gens = o.action_generators(m);
        for (std::size_t k = 0; k < gens.size(); ++k)
            for (int deg : c.degrees()) {
                const ExactMatrix g = gens[k].component(deg);
                for (const auto& [pos, s] : g.entries())
                    os << "act " << (k + 1) << " " << c.labels(deg)[pos.second] << " "
                       << c.labels(deg)[pos.first] << " " << s.str() << "\n";
            }
    }
    return os.str();
}

} // namespace opcx::ops
