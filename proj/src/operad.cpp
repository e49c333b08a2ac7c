#include "opcx/operad.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace opcx::ops {

using exact::ExactMatrix;
using exact::Scalar;

/* --- SymmetricCollection --- */

SymmetricCollection SymmetricCollection::make(RingDesc ring, int max_arity,
                                              std::map<int, Complex> components,
                                              std::map<int, std::vector<ChainMap>> actions,
                                              std::string unit_label) {
    SymmetricCollection o(ring, Complex::zero(ring));
    if (max_arity < 1) throw Error("collection: max_arity must be at least 1");
    o.max_arity_ = max_arity;
    for (auto& [m, c] : components) {
        if (m < 0 || m > max_arity) throw Error("collection: arity outside declared range");
        if (!(c.ring() == ring)) throw Error("collection: component ring mismatch");
        if (!c.is_zero_complex()) o.components_.emplace(m, std::move(c));
    }
    // arity 1 carries the operad unit: a degree-0 basis vector with d(unit)=0
    // and no differential between the unit line and its complement
    const auto it1 = o.components_.find(1);
    if (it1 == o.components_.end())
        throw Error("collection: arity 1 must contain the unit");
    const Complex& c1 = it1->second;
    o.unit_label_ = std::move(unit_label);
    const std::size_t unit_idx = c1.index_of(0, o.unit_label_);
    const ExactMatrix d1 = c1.differential(1);
    for (std::size_t j = 0; j < d1.cols(); ++j)
        if (!d1.get(unit_idx, j).is_zero())
            throw Error("collection: differential hits the unit line");
    // the reduced part: everything except the unit basis vector
    {
        std::map<int, std::vector<std::string>> basis;
        for (const auto& [deg, labels] : c1.basis()) {
            std::vector<std::string> kept;
            for (std::size_t i = 0; i < labels.size(); ++i)
                if (deg != 0 || i != unit_idx) kept.push_back(labels[i]);
            if (!kept.empty()) basis[deg] = std::move(kept);
        }
        std::map<int, ExactMatrix> diffs;
        for (int deg : c1.degrees()) {
            const ExactMatrix d = c1.differential(deg);
            if (d.is_zero()) continue;
            const std::size_t r_skip = deg - 1 == 0 ? unit_idx : d.rows();
            const std::size_t c_skip = deg == 0 ? unit_idx : d.cols();
            ExactMatrix m(ring, d.rows() - (deg - 1 == 0 ? 1 : 0), d.cols() - (deg == 0 ? 1 : 0));
            for (const auto& [pos, s] : d.entries()) {
                auto [i, j] = pos;
                if (i == r_skip || j == c_skip) continue;
                m.set(i > r_skip ? i - 1 : i, j > c_skip ? j - 1 : j, s);
            }
            if (!m.is_zero()) diffs.emplace(deg, std::move(m));
        }
        o.reduced_unary_ = Complex::make(ring, std::move(basis), std::move(diffs));
    }
    // symmetric-group actions: adjacent transpositions; squares are the
    // identity, braid relations checked for small arities
    for (auto& [m, gens] : actions) {
        if (m < 2 || m > max_arity) throw Error("collection: action on bad arity");
        const Complex& c = o.component(m);
        if (c.is_zero_complex()) throw Error("collection: action on a zero component");
        if (static_cast<int>(gens.size()) != m - 1)
            throw Error("collection: arity " + std::to_string(m) + " needs " +
                        std::to_string(m - 1) + " transposition generators");
        for (const auto& g : gens)
            if (!(g.source() == c) || !(g.target() == c))
                throw Error("collection: action generator is not a self map");
        const ChainMap id = chain::identity_map(c);
        for (const auto& g : gens)
            if (!(chain::compose(g, g) == id))
                throw Error("collection: transposition generator squared is not the identity");
        if (m <= 4) {
            for (int i = 0; i + 1 < m - 1; ++i) {
                const ChainMap lhs = chain::compose(gens[i], chain::compose(gens[i + 1], gens[i]));
                const ChainMap rhs = chain::compose(gens[i + 1], chain::compose(gens[i], gens[i + 1]));
                if (!(lhs == rhs)) throw Error("collection: braid relation fails");
            }
            for (int i = 0; i < m - 1; ++i)
                for (int j = i + 2; j < m - 1; ++j)
                    if (!(chain::compose(gens[i], gens[j]) == chain::compose(gens[j], gens[i])))
                        throw Error("collection: distant transpositions do not commute");
        }
        o.actions_.emplace(m, std::move(gens));
    }
    return o;
}

const Complex& SymmetricCollection::component(int arity) const {
    if (arity < 0 || arity > max_arity_)
        throw Error("collection: arity " + std::to_string(arity) + " outside declared range [0, " +
                    std::to_string(max_arity_) + "]");
    auto it = components_.find(arity);
    return it == components_.end() ? zero_ : it->second;
}

const std::vector<ChainMap>& SymmetricCollection::action_generators(int arity) const {
    static const std::vector<ChainMap> none;
    auto it = actions_.find(arity);
    return it == actions_.end() ? none : it->second;
}

/* --- built-in operads --- */

namespace {

Complex line(RingDesc ring) { return Complex::make(ring, {{0, {"e"}}}, {}); }

std::vector<std::string> permutation_labels(int m) {
    std::vector<int> p(m);
    std::iota(p.begin(), p.end(), 1);
    std::vector<std::string> labels;
    do {
        std::string s;
        for (int x : p) s += std::to_string(x);
        labels.push_back(std::move(s));
    } while (std::next_permutation(p.begin(), p.end()));
    return labels;
}

} // namespace

SymmetricCollection builtin_operad(const std::string& name, RingDesc ring, int max_arity) {
    if (max_arity < 1) throw Error("builtin_operad: max_arity must be at least 1");
    std::map<int, Complex> components;
    std::map<int, std::vector<ChainMap>> actions;
    if (name == "unit") {
        components.emplace(1, line(ring));
        return SymmetricCollection::make(ring, max_arity, std::move(components), {}, "e");
    }
    if (name == "com" || name == "com-nonunital") {
        const int lo = name == "com" ? 0 : 1;
        for (int m = lo; m <= max_arity; ++m) components.emplace(m, line(ring));
        return SymmetricCollection::make(ring, max_arity, std::move(components), {}, "e");
    }
    if (name == "assoc-nonunital") {
        if (max_arity > 8) throw Error("builtin_operad: assoc-nonunital supports arity <= 8");
        for (int m = 1; m <= max_arity; ++m) {
            const auto labels = permutation_labels(m);
            std::map<std::string, std::size_t> index;
            for (std::size_t i = 0; i < labels.size(); ++i) index[labels[i]] = i;
            Complex c = Complex::make(ring, {{0, labels}}, {});
            if (m >= 2) {
                std::vector<ChainMap> gens;
                for (int j = 1; j < m; ++j) {
                    // left multiplication by the transposition (j, j+1): swap
                    // the values j and j+1 in one-line notation
                    ExactMatrix g(ring, labels.size(), labels.size());
                    for (std::size_t col = 0; col < labels.size(); ++col) {
                        std::string img = labels[col];
                        for (auto& ch : img) {
                            if (ch == '0' + j)
                                ch = static_cast<char>('0' + j + 1);
                            else if (ch == '0' + j + 1)
                                ch = static_cast<char>('0' + j);
                        }
                        g.set(index.at(img), col, Scalar::one(ring));
                    }
                    gens.push_back(ChainMap::make(c, c, {{0, std::move(g)}}));
                }
                actions.emplace(m, std::move(gens));
            }
            components.emplace(m, std::move(c));
        }
        return SymmetricCollection::make(ring, max_arity, std::move(components), std::move(actions),
                                         "1");
    }
    throw Error("unknown operad: " + name +
                " (expected unit, com, com-nonunital or assoc-nonunital)");
}

GeneratorCollection make_generator_collection(RingDesc ring, int n, int s) {
    const Complex unit = chain::unit_complex(ring);
    return {n, chain::shift(chain::cone(chain::identity_map(unit)), s)};
}

/* --- tensor assembly over an ordered factor list --- */

namespace {

struct TensorAssembly {
    RingDesc ring;
    std::vector<Complex> factors;
    // per factor: global basis in (degree, index) order, and its inverse
    std::vector<std::vector<std::pair<int, std::size_t>>> gb;
    std::vector<std::map<std::pair<int, std::size_t>, std::size_t>> gb_pos;
    // per total degree: tuples of per-factor global positions, lexicographic
    std::map<int, std::vector<std::vector<std::size_t>>> tuples;
    std::map<int, std::map<std::vector<std::size_t>, std::size_t>> tuple_pos;
    Complex cx;

    TensorAssembly(RingDesc rg, std::vector<Complex> fs)
        : ring(rg), factors(std::move(fs)), cx(Complex::zero(rg)) {
        if (factors.empty()) throw Error("tensor assembly needs at least one factor");
        bool any_zero = false;
        for (const auto& f : factors) {
            std::vector<std::pair<int, std::size_t>> g;
            for (int deg : f.degrees())
                for (std::size_t i = 0; i < f.dim(deg); ++i) g.emplace_back(deg, i);
            if (g.empty()) any_zero = true;
            std::map<std::pair<int, std::size_t>, std::size_t> pos;
            for (std::size_t i = 0; i < g.size(); ++i) pos[g[i]] = i;
            gb.push_back(std::move(g));
            gb_pos.push_back(std::move(pos));
        }
        if (any_zero) return; // zero complex

        std::vector<std::size_t> t(factors.size(), 0);
        for (;;) {
            int deg = 0;
            for (std::size_t i = 0; i < t.size(); ++i) deg += gb[i][t[i]].first;
            tuple_pos[deg][t] = tuples[deg].size();
            tuples[deg].push_back(t);
            // odometer, last factor fastest: keeps tuples lexicographic
            std::size_t i = t.size();
            while (i > 0) {
                --i;
                if (++t[i] < gb[i].size()) break;
                t[i] = 0;
                if (i == 0) goto done;
            }
        }
    done:
        std::map<int, std::vector<std::string>> basis;
        for (const auto& [deg, ts] : tuples) {
            std::vector<std::string> labels;
            for (const auto& tup : ts) {
                std::string l;
                for (std::size_t i = 0; i < tup.size(); ++i) {
                    const auto [fd, fi] = gb[i][tup[i]];
                    if (i) l += "⊗";
                    l += factors[i].labels(fd)[fi];
                }
                labels.push_back(std::move(l));
            }
            basis[deg] = std::move(labels);
        }
        std::map<int, ExactMatrix> diffs;
        for (const auto& [deg, ts] : tuples) {
            auto lower = tuples.find(deg - 1);
            if (lower == tuples.end()) continue;
            ExactMatrix m(ring, lower->second.size(), ts.size());
            for (std::size_t k = 0; k < ts.size(); ++k) {
                const auto& tup = ts[k];
                int prefix = 0;
                for (std::size_t i = 0; i < tup.size(); ++i) {
                    const auto [fd, fi] = gb[i][tup[i]];
                    const ExactMatrix d = factors[i].differential(fd);
                    const Scalar sign(ring, prefix % 2 == 0 ? 1 : -1);
                    for (std::size_t r = 0; r < d.rows(); ++r) {
                        const Scalar s = d.get(r, fi);
                        if (s.is_zero()) continue;
                        auto tup2 = tup;
                        tup2[i] = gb_pos[i].at({fd - 1, r});
                        m.add_at(tuple_pos.at(deg - 1).at(tup2), k, sign * s);
                    }
                    prefix += fd;
                }
            }
            if (!m.is_zero()) diffs.emplace(deg, std::move(m));
        }
        cx = Complex::make(ring, std::move(basis), std::move(diffs));
    }

    /* The chain self-map sending x_0 ⊗ ... ⊗ x_{k-1} to the Koszul-signed
     * tensor with slot i moved to slot_dest[i], after applying the internal
     * map of slot i (degree-preserving; empty matrix list entry = identity). */
    ChainMap permutation_map(const std::vector<std::size_t>& slot_dest,
                             const std::vector<std::optional<ChainMap>>& internal) const {
        std::map<int, ExactMatrix> comps;
        for (const auto& [deg, ts] : tuples) {
            ExactMatrix m(ring, ts.size(), ts.size());
            for (std::size_t k = 0; k < ts.size(); ++k) {
                const auto& tup = ts[k];
                // expand internal maps slot by slot
                struct Term {
                    Scalar coeff;
                    std::vector<std::size_t> parts;
                };
                std::vector<Term> terms{{Scalar::one(ring), {}}};
                for (std::size_t i = 0; i < tup.size(); ++i) {
                    const auto [fd, fi] = gb[i][tup[i]];
                    std::vector<Term> next;
                    for (const auto& term : terms) {
                        if (!internal[i]) {
                            Term t2 = term;
                            t2.parts.push_back(tup[i]);
                            next.push_back(std::move(t2));
                            continue;
                        }
                        const ExactMatrix a = internal[i]->component(fd);
                        for (std::size_t r = 0; r < a.rows(); ++r) {
                            const Scalar s = a.get(r, fi);
                            if (s.is_zero()) continue;
                            Term t2 = term;
                            t2.coeff = term.coeff * s;
                            t2.parts.push_back(gb_pos[i].at({fd, r}));
                            next.push_back(std::move(t2));
                        }
                    }
                    terms = std::move(next);
                }
                // move slots with the Koszul sign of the position permutation
                int sign_exp = 0;
                for (std::size_t i = 0; i < tup.size(); ++i)
                    for (std::size_t j = i + 1; j < tup.size(); ++j)
                        if (slot_dest[i] > slot_dest[j])
                            sign_exp += gb[i][tup[i]].first * gb[j][tup[j]].first;
                const Scalar sign(ring, sign_exp % 2 == 0 ? 1 : -1);
                for (const auto& term : terms) {
                    std::vector<std::size_t> dest(tup.size());
                    for (std::size_t i = 0; i < tup.size(); ++i)
                        dest[slot_dest[i]] = term.parts[i];
                    m.add_at(tuple_pos.at(deg).at(dest), k, sign * term.coeff);
                }
            }
            if (!m.is_zero()) comps.emplace(deg, std::move(m));
        }
        return ChainMap::make(cx, cx, std::move(comps));
    }
};

// σ as a composite of the collection's adjacent-transposition generators;
// empty generator list = trivial action = identity
std::optional<ChainMap> sigma_action(const SymmetricCollection& o, int arity,
                                     const std::vector<int>& sigma) {
    bool id = true;
    for (std::size_t i = 0; i < sigma.size(); ++i)
        if (sigma[i] != static_cast<int>(i)) id = false;
    if (id) return std::nullopt;
    const auto& gens = o.action_generators(arity);
    if (gens.empty()) return std::nullopt; // trivial action
    // one-line bubble decomposition: sigma = s_{j_k} ∘ ... ∘ s_{j_1}
    std::vector<int> a = sigma;
    std::vector<int> swaps;
    for (;;) {
        bool sorted = true;
        for (std::size_t j = 0; j + 1 < a.size(); ++j)
            if (a[j] > a[j + 1]) {
                std::swap(a[j], a[j + 1]);
                swaps.push_back(static_cast<int>(j));
                sorted = false;
            }
        if (sorted) break;
    }
    ChainMap result = gens[swaps[0]];
    for (std::size_t k = 1; k < swaps.size(); ++k) result = chain::compose(gens[swaps[k]], result);
    return result;
}

} // namespace

TreeComponent tree_component(const SymmetricCollection& o, const GeneratorCollection& gen,
                             const trees::MarkedTree& t) {
    if (t.marking().n != gen.n)
        throw Error("tree_component: marking arity does not match the generating collection");
    if (!trees::is_reduced(t)) throw Error("tree_component: tree is not reduced");

    const RingDesc ring = o.ring();
    const auto order = trees::canonical_order(t);
    std::vector<int> factor_order;
    for (int v : order)
        if (t.is_o_vertex(v)) factor_order.push_back(v);
    for (int v : order)
        if (t.in_s(v)) factor_order.push_back(v);

    TreeComponent out{t,
                      trees::canonical_code(t),
                      t.s_count(),
                      1,
                      factor_order,
                      Complex::zero(ring),
                      {},
                      Complex::zero(ring),
                      chain::identity_map(Complex::zero(ring))};

    const trees::AutGroup aut = trees::automorphisms(t);
    out.aut_order = aut.order;

    if (factor_order.empty()) {
        // empty tensor product: the unit line (a bare argument slot)
        out.raw = chain::unit_complex(ring);
        out.component = out.raw;
        out.projection = chain::identity_map(out.raw);
        return out;
    }

    std::vector<Complex> factors;
    for (int v : factor_order) {
        if (t.in_s(v)) {
            factors.push_back(gen.m_complex);
        } else {
            const int m = t.tree().valence(v);
            factors.push_back(m == 1 ? o.reduced_unary() : o.component(m));
        }
    }
    TensorAssembly assembly(ring, std::move(factors));
    out.raw = assembly.cx;

    if (out.raw.is_zero_complex()) {
        out.component = out.raw;
        out.projection = chain::identity_map(out.raw);
        return out;
    }

    std::map<int, std::size_t> slot_of;
    for (std::size_t i = 0; i < factor_order.size(); ++i) slot_of[factor_order[i]] = i;

    std::vector<ChainMap> action_gens;
    for (const auto& perm : aut.generators) {
        std::vector<std::size_t> slot_dest(factor_order.size());
        std::vector<std::optional<ChainMap>> internal(factor_order.size());
        for (std::size_t i = 0; i < factor_order.size(); ++i) {
            const int v = factor_order[i];
            slot_dest[i] = slot_of.at(perm[v]);
            if (t.in_s(v)) continue; // the generating collection carries the trivial action
            const int m = t.tree().valence(v);
            if (m < 2) continue;
            // the permutation induced on the inputs of v: canonical child c_k
            // of v is carried to child sigma(k) of perm[v]
            const auto kids_v = trees::canonical_children(t, v);
            const auto kids_w = trees::canonical_children(t, perm[v]);
            std::vector<int> sigma(m);
            for (int k = 0; k < m; ++k) {
                const int image = perm[kids_v[k]];
                const auto it = std::find(kids_w.begin(), kids_w.end(), image);
                if (it == kids_w.end()) throw Error("automorphism does not respect children");
                sigma[k] = static_cast<int>(it - kids_w.begin());
            }
            internal[i] = sigma_action(o, m, sigma);
        }
        action_gens.push_back(assembly.permutation_map(slot_dest, internal));
    }
    out.action_generators = action_gens;

    chain::GroupAction action{out.raw, std::move(action_gens), aut.order};
    chain::Coinvariants q = chain::coinvariants(action);
    out.component = std::move(q.complex);
    out.projection = std::move(q.projection);
    return out;
}

/* --- coproduct truncation and the inclusion --- */

CoproductTruncation coproduct_component(const SymmetricCollection& o,
                                        const GeneratorCollection& gen, int n, int r, int max_s) {
    if (n != gen.n) throw Error("coproduct_component: n does not match the generating collection");
    const RingDesc ring = o.ring();
    const trees::EnumFlags flags{o.has_nullary(), o.has_reduced_unary()};
    const auto bound = trees::structural_bound(r, n, max_s, flags);
    if (static_cast<int>(bound.max_valence) > o.max_arity() || r > o.max_arity())
        throw Error("coproduct_component: collection declared up to arity " +
                    std::to_string(o.max_arity()) + " but valences up to " +
                    std::to_string(bound.max_valence) + " may occur");

    CoproductTruncation out{r,
                            max_s,
                            {},
                            Complex::zero(ring),
                            {},
                            chain::identity_map(Complex::zero(ring)),
                            Complex::zero(ring),
                            chain::identity_map(Complex::zero(ring))};

    const auto classes = trees::enumerate_reduced(r, n, max_s, flags);
    for (const auto& [s, reps] : classes)
        for (const auto& rep : reps) out.parts.push_back(tree_component(o, gen, rep));

    std::vector<Complex> part_complexes;
    for (const auto& p : out.parts) part_complexes.push_back(p.component);
    chain::DirectSum sum = chain::direct_sum(ring, part_complexes);
    out.total = std::move(sum.total);
    out.part_injections = std::move(sum.injections);

    // |S| = 0 block and its projection
    std::vector<Complex> s0_components;
    std::vector<std::size_t> s0_indices;
    for (std::size_t i = 0; i < out.parts.size(); ++i)
        if (out.parts[i].s_count == 0) {
            s0_components.push_back(out.parts[i].component);
            s0_indices.push_back(i);
        }
    chain::DirectSum s0_sum = chain::direct_sum(ring, s0_components);
    out.s0_block = std::move(s0_sum.total);
    {
        std::map<int, ExactMatrix> comps;
        for (int deg : out.total.degrees()) {
            ExactMatrix m(ring, out.s0_block.dim(deg), out.total.dim(deg));
            for (std::size_t k = 0; k < s0_indices.size(); ++k) {
                const ExactMatrix into_block = s0_sum.injections[k].component(deg);
                const ExactMatrix into_total = out.part_injections[s0_indices[k]].component(deg);
                const ExactMatrix contrib = into_block * into_total.transpose();
                for (const auto& [pos, s] : contrib.entries()) m.add_at(pos.first, pos.second, s);
            }
            if (!m.is_zero()) comps.emplace(deg, std::move(m));
        }
        out.s0_projection = ChainMap::make(out.total, out.s0_block, std::move(comps));
    }

    // the inclusion O(r) -> total
    const Complex& source = o.component(r);
    std::map<int, ExactMatrix> comps;
    if (r == 1) {
        // the unit goes to the bare argument tree, the reduced part to the
        // one-vertex corolla
        const trees::CanonicalCode arg_code = "(a1:)";
        const trees::CanonicalCode corolla_code = "(o:(a1:))";
        std::size_t arg_part = out.parts.size(), corolla_part = out.parts.size();
        for (std::size_t i = 0; i < out.parts.size(); ++i) {
            if (out.parts[i].code == arg_code) arg_part = i;
            if (out.parts[i].code == corolla_code) corolla_part = i;
        }
        if (arg_part == out.parts.size()) throw Error("inclusion: bare argument class missing");
        for (int deg : source.degrees()) {
            ExactMatrix m(ring, out.total.dim(deg), source.dim(deg));
            for (std::size_t b = 0; b < source.dim(deg); ++b) {
                const std::string& label = source.labels(deg)[b];
                if (deg == 0 && label == o.unit_label()) {
                    const ExactMatrix inj = out.part_injections[arg_part].component(0);
                    for (std::size_t i = 0; i < inj.rows(); ++i)
                        if (!inj.get(i, 0).is_zero()) m.set(i, b, inj.get(i, 0));
                } else {
                    if (corolla_part == out.parts.size())
                        throw Error("inclusion: reduced unary class missing");
                    const auto& comp = out.parts[corolla_part].component;
                    const std::size_t col = comp.index_of(deg, label);
                    const ExactMatrix inj = out.part_injections[corolla_part].component(deg);
                    for (std::size_t i = 0; i < inj.rows(); ++i)
                        if (!inj.get(i, col).is_zero()) m.set(i, b, inj.get(i, col));
                }
            }
            if (!m.is_zero()) comps.emplace(deg, std::move(m));
        }
    } else if (!source.is_zero_complex()) {
        // exactly one |S| = 0 class: the r-corolla (r >= 2) or the bare
        // 0-ary vertex (r = 0); its component is O(r) itself
        if (s0_indices.size() != 1)
            throw Error("inclusion: expected exactly one |S| = 0 class for arity " +
                        std::to_string(r));
        const TreeComponent& part = out.parts[s0_indices[0]];
        if (!(part.component.dims() == source.dims()))
            throw Error("inclusion: |S| = 0 component does not match O(r)");
        for (int deg : source.degrees()) comps.emplace(deg, out.part_injections[s0_indices[0]].component(deg));
    }
    out.inclusion = ChainMap::make(source, out.total, std::move(comps));
    return out;
}

InclusionCheck check_inclusion_qiso(const SymmetricCollection& o, const GeneratorCollection& gen,
                                    int n, int r, int max_s) {
    const CoproductTruncation cp = coproduct_component(o, gen, n, r, max_s);
    InclusionCheck out{r, true, {}};
    for (const auto& part : cp.parts) {
        ComponentVerdict v{part.code,        r,
                           part.s_count,     part.aut_order,
                           part.component.dims(), chain::homology(part.component),
                           true};
        v.acyclic = v.homology.is_zero();
        if (part.s_count >= 1 && !v.acyclic) out.all_acyclic = false;
        out.records.push_back(std::move(v));
    }
    return out;
}

} // namespace opcx::ops
