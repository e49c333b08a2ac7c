#include "opcx/verifier.hpp"

#include <algorithm>

namespace opcx::verify {

using chain::ChainMap;
using chain::Complex;
using exact::ExactMatrix;
using exact::RingDesc;
using exact::Scalar;

std::string verdict_str(Verdict v) {
    switch (v) {
        case Verdict::QisoUpToTruncation: return "QISO_UP_TO_TRUNCATION";
        case Verdict::NotQiso: return "NOT_QISO";
        case Verdict::Unsupported: return "UNSUPPORTED";
    }
    return "?";
}

/* --- symmetric power oracle --- */

Complex symmetric_power_oracle(const Complex& m_complex, int power) {
    if (power < 0) throw Error("symmetric power: negative exponent");
    const RingDesc ring = m_complex.ring();
    if (power == 0) return chain::unit_complex(ring);
    if (power == 1) return m_complex;
    if (!ring.is_field())
        throw UnsupportedRing("symmetric powers beyond m = 1 need a field ring");

    // flat basis of M, then all tuples, ordered lexicographically
    std::vector<std::pair<int, std::size_t>> flat;
    for (int deg : m_complex.degrees())
        for (std::size_t i = 0; i < m_complex.dim(deg); ++i) flat.emplace_back(deg, i);
    if (flat.empty()) return Complex::zero(ring);
    std::map<std::pair<int, std::size_t>, std::size_t> flat_pos;
    for (std::size_t i = 0; i < flat.size(); ++i) flat_pos[flat[i]] = i;

    std::map<int, std::vector<std::vector<std::size_t>>> tuples;
    std::map<int, std::map<std::vector<std::size_t>, std::size_t>> pos;
    std::vector<std::size_t> t(power, 0);
    for (;;) {
        int deg = 0;
        for (std::size_t x : t) deg += flat[x].first;
        pos[deg][t] = tuples[deg].size();
        tuples[deg].push_back(t);
        int i = power;
        bool done = false;
        while (i > 0) {
            --i;
            if (++t[i] < flat.size()) break;
            t[i] = 0;
            if (i == 0) done = true;
        }
        if (done) break;
    }

    std::map<int, std::vector<std::string>> basis;
    for (const auto& [deg, ts] : tuples) {
        std::vector<std::string> labels;
        for (const auto& tup : ts) {
            std::string l;
            for (std::size_t i = 0; i < tup.size(); ++i) {
                const auto [fd, fi] = flat[tup[i]];
                if (i) l += "·";
                l += m_complex.labels(fd)[fi];
            }
            labels.push_back(std::move(l));
        }
        basis[deg] = std::move(labels);
    }
    std::map<int, ExactMatrix> diffs;
    for (const auto& [deg, ts] : tuples) {
        auto lower = tuples.find(deg - 1);
        if (lower == tuples.end()) continue;
        ExactMatrix dm(ring, lower->second.size(), ts.size());
        for (std::size_t k = 0; k < ts.size(); ++k) {
            int prefix = 0;
            for (int i = 0; i < power; ++i) {
                const auto [fd, fi] = flat[ts[k][i]];
                const ExactMatrix d = m_complex.differential(fd);
                const Scalar sign(ring, prefix % 2 == 0 ? 1 : -1);
                for (std::size_t r = 0; r < d.rows(); ++r) {
                    const Scalar s = d.get(r, fi);
                    if (s.is_zero()) continue;
                    auto tup2 = ts[k];
                    tup2[i] = flat_pos.at({fd - 1, r});
                    dm.add_at(pos.at(deg - 1).at(tup2), k, sign * s);
                }
                prefix += fd;
            }
        }
        if (!dm.is_zero()) diffs.emplace(deg, std::move(dm));
    }
    Complex tensor_power = Complex::make(ring, std::move(basis), std::move(diffs));

    // adjacent transpositions with Koszul signs
    std::vector<ChainMap> gens;
    for (int j = 0; j + 1 < power; ++j) {
        std::map<int, ExactMatrix> comps;
        for (const auto& [deg, ts] : tuples) {
            ExactMatrix g(ring, ts.size(), ts.size());
            for (std::size_t k = 0; k < ts.size(); ++k) {
                auto tup = ts[k];
                const int d1 = flat[tup[j]].first, d2 = flat[tup[j + 1]].first;
                std::swap(tup[j], tup[j + 1]);
                const Scalar sign(ring, (d1 * d2) % 2 == 0 ? 1 : -1);
                g.add_at(pos.at(deg).at(tup), k, sign);
            }
            comps.emplace(deg, std::move(g));
        }
        gens.push_back(ChainMap::make(tensor_power, tensor_power, std::move(comps)));
    }
    std::uint64_t order = 1;
    for (int f = 2; f <= power; ++f) order *= static_cast<std::uint64_t>(f);
    return chain::coinvariants({tensor_power, std::move(gens), order}).complex;
}

/* --- scenario runners --- */

namespace {

struct RunOutcome {
    std::vector<ops::ComponentVerdict> records;
    bool all_acyclic = true;
    bool aut_all_trivial = true;
    std::map<int, std::size_t> total_dims;
};

RunOutcome analyze(const ops::CoproductTruncation& cp, int r) {
    RunOutcome out;
    out.total_dims = cp.total.dims();
    for (const auto& part : cp.parts) {
        ops::ComponentVerdict v{part.code,
                                r,
                                part.s_count,
                                part.aut_order,
                                part.component.dims(),
                                chain::homology(part.component),
                                true};
        v.acyclic = v.homology.is_zero();
        if (part.s_count >= 1 && !v.acyclic) out.all_acyclic = false;
        if (part.aut_order != 1) out.aut_all_trivial = false;
        out.records.push_back(std::move(v));
    }
    return out;
}

void pick_witness(Report& report) {
    for (const auto& rec : report.components)
        if (rec.s_count >= 1 && !rec.acyclic) {
            report.witness_code = rec.code;
            report.witness_r = rec.r;
            return;
        }
}

} // namespace

Report run_counterexample(unsigned long p, int max_power, int s) {
    if (max_power < 0) throw Error("run_counterexample: max_power must be non-negative");
    const RingDesc ring = RingDesc::prime_field(p);
    Report report;
    report.scenario = "counterexample";
    report.params = {ring, "com", 0, s, 0, max_power};

    const int max_arity = std::max(1, max_power);
    const ops::SymmetricCollection o = ops::builtin_operad("com", ring, max_arity);
    const ops::GeneratorCollection gen = ops::make_generator_collection(ring, 0, s);
    const ops::CoproductTruncation cp = ops::coproduct_component(o, gen, 0, 0, max_power);
    RunOutcome outcome = analyze(cp, 0);
    report.components = std::move(outcome.records);

    // the mechanical validation of O(0) = S(M): degreewise dimensions of the
    // truncated coproduct must match the sum of symmetric powers exactly
    std::map<int, std::size_t> expected;
    for (int m = 0; m <= max_power; ++m)
        for (const auto& [deg, d] : symmetric_power_oracle(gen.m_complex, m).dims())
            expected[deg] += d;
    if (expected != outcome.total_dims)
        throw Error("counterexample run: coproduct dimensions disagree with the "
                    "symmetric-power oracle");

    report.verdict = outcome.all_acyclic ? Verdict::QisoUpToTruncation : Verdict::NotQiso;
    if (report.verdict == Verdict::NotQiso) pick_witness(report);
    return report;
}

Report run_case_i(const std::string& operad, int n, RingDesc ring, int r_max, int max_s, int s) {
    if (n <= 0) throw Error("case (i) requires n > 0");
    if (r_max < 0 || max_s < 0) throw Error("case (i): negative range");
    Report report;
    report.scenario = "case_i";
    report.params = {ring, operad, n, s, r_max, max_s};

    const int max_arity = std::max({1, n, r_max + max_s, r_max});
    const ops::SymmetricCollection o = ops::builtin_operad(operad, ring, max_arity);
    if (o.has_nullary())
        throw Error("case (i) requires an operad with O(0) = 0; '" + operad + "' has O(0) != 0");
    const ops::GeneratorCollection gen = ops::make_generator_collection(ring, n, s);

    bool all_acyclic = true, aut_ok = true;
    try {
        for (int r = 0; r <= r_max; ++r) {
            RunOutcome outcome = analyze(ops::coproduct_component(o, gen, n, r, max_s), r);
            all_acyclic = all_acyclic && outcome.all_acyclic;
            aut_ok = aut_ok && outcome.aut_all_trivial;
            for (auto& rec : outcome.records) report.components.push_back(std::move(rec));
        }
    } catch (const UnsupportedRing& e) {
        report.verdict = Verdict::Unsupported;
        report.unsupported_reason = e.what();
        return report;
    }
    report.aut_all_trivial = aut_ok;
    report.verdict =
        all_acyclic && aut_ok ? Verdict::QisoUpToTruncation : Verdict::NotQiso;
    if (!all_acyclic) pick_witness(report);
    if (all_acyclic && !aut_ok) {
        report.verdict = Verdict::Unsupported;
        report.unsupported_reason = "a reduced class has nontrivial automorphisms";
    }
    return report;
}

Report run_case_ii(const std::string& operad, int n, int r_max, int max_s, int s) {
    if (n < 0 || r_max < 0 || max_s < 0) throw Error("case (ii): negative parameter");
    const RingDesc ring = RingDesc::rationals();
    Report report;
    report.scenario = "case_ii";
    report.params = {ring, operad, n, s, r_max, max_s};

    const int max_arity = std::max({1, n, r_max + max_s, r_max});
    const ops::SymmetricCollection o = ops::builtin_operad(operad, ring, max_arity);
    const ops::GeneratorCollection gen = ops::make_generator_collection(ring, n, s);

    bool all_acyclic = true;
    for (int r = 0; r <= r_max; ++r) {
        RunOutcome outcome = analyze(ops::coproduct_component(o, gen, n, r, max_s), r);
        all_acyclic = all_acyclic && outcome.all_acyclic;
        for (auto& rec : outcome.records) report.components.push_back(std::move(rec));
    }
    report.verdict = all_acyclic ? Verdict::QisoUpToTruncation : Verdict::NotQiso;
    if (!all_acyclic) pick_witness(report);
    return report;
}

} // namespace opcx::verify
