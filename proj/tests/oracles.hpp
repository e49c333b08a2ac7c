#pragma once

/* Brute-force tree oracles, independent of the canonical-code machinery:
 * isomorphism by backtracking bijection search, automorphism counting by
 * permanent-style recursion, and exhaustive generation of all marked trees
 * up to a vertex bound (parent vectors with parent[i] < i reach every
 * isomorphism class, most of them many times over — which is exactly what a
 * code-invariance test wants).
 */

#include "opcx/tree.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <sstream>
#include <vector>

namespace oracle {

using opcx::trees::MarkedTree;
using opcx::trees::Marking;
using opcx::trees::Tree;

inline bool vertex_compatible(const MarkedTree& a, int v, const MarkedTree& b, int w) {
    return a.tree().valence(v) == b.tree().valence(w) && a.in_s(v) == b.in_s(w) &&
           a.arg_label(v) == b.arg_label(w);
}

/* exists a bijection subtree(v) -> subtree(w) preserving parent, S and arg */
inline bool brute_subtree_iso(const MarkedTree& a, int v, const MarkedTree& b, int w) {
    if (!vertex_compatible(a, v, b, w)) return false;
    const auto& ka = a.tree().children(v);
    const auto& kb = b.tree().children(w);
    std::vector<std::size_t> perm(kb.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::function<bool(std::size_t)> match = [&](std::size_t i) -> bool {
        if (i == ka.size()) return true;
        for (std::size_t j = i; j < perm.size(); ++j) {
            std::swap(perm[i], perm[j]);
            if (brute_subtree_iso(a, ka[i], b, kb[perm[i]]) && match(i + 1)) {
                std::swap(perm[i], perm[j]);
                return true;
            }
            std::swap(perm[i], perm[j]);
        }
        return false;
    };
    return match(0);
}

inline bool brute_iso(const MarkedTree& a, const MarkedTree& b) {
    if (a.tree().n_vertices() != b.tree().n_vertices()) return false;
    if (a.marking().r != b.marking().r || a.marking().n != b.marking().n) return false;
    if (a.s_count() != b.s_count()) return false;
    return brute_subtree_iso(a, a.tree().root(), b, b.tree().root());
}

/* number of bijections subtree(v) -> subtree(w); the automorphism count is
 * the root-to-root case */
inline std::uint64_t brute_iso_count(const MarkedTree& a, int v, const MarkedTree& b, int w) {
    if (!vertex_compatible(a, v, b, w)) return 0;
    const auto& ka = a.tree().children(v);
    const auto& kb = b.tree().children(w);
    std::vector<std::size_t> taken(kb.size(), 0);
    std::function<std::uint64_t(std::size_t)> count = [&](std::size_t i) -> std::uint64_t {
        if (i == ka.size()) return 1;
        std::uint64_t total = 0;
        for (std::size_t j = 0; j < kb.size(); ++j) {
            if (taken[j]) continue;
            const std::uint64_t sub = brute_iso_count(a, ka[i], b, kb[j]);
            if (sub == 0) continue;
            taken[j] = 1;
            total += sub * count(i + 1);
            taken[j] = 0;
        }
        return total;
    };
    return count(0);
}

inline std::uint64_t brute_aut_count(const MarkedTree& a) {
    return brute_iso_count(a, a.tree().root(), a, a.tree().root());
}

/* cheap isomorphism invariant: only same-key pairs need a bijection search */
inline std::string cheap_key(const MarkedTree& t) {
    const auto& tr = t.tree();
    std::vector<int> valences, s_depths, arg_depths(t.marking().r, 0);
    auto depth = [&](int v) {
        int d = 0;
        for (int cur = v; cur != tr.root(); cur = tr.parent(cur)) ++d;
        return d;
    };
    for (int v = 0; v < tr.n_vertices(); ++v) {
        valences.push_back(tr.valence(v));
        if (t.in_s(v)) s_depths.push_back(depth(v));
    }
    for (int k = 0; k < t.marking().r; ++k) arg_depths[k] = depth(t.marking().arg_vertex[k]);
    std::sort(valences.begin(), valences.end());
    std::sort(s_depths.begin(), s_depths.end());
    std::ostringstream os;
    os << tr.n_vertices() << "|";
    for (int x : valences) os << x << ",";
    os << "|";
    for (int x : s_depths) os << x << ",";
    os << "|";
    for (int x : arg_depths) os << x << ",";
    return os.str();
}

/* every marked tree with up to max_vertices vertices for the given (r, n);
 * the callback may reject invalid combinations cheaply */
inline void for_each_marked_tree(int r, int n, int max_vertices,
                                 const std::function<void(const MarkedTree&)>& fn) {
    for (int v_count = 1; v_count <= max_vertices; ++v_count) {
        std::vector<int> parent(v_count, -1);
        std::function<void(int)> shapes = [&](int v) {
            if (v == v_count) {
                const Tree tree = Tree::from_parent(parent);
                std::vector<int> leaves, val_n;
                for (int x = 0; x < v_count; ++x) {
                    if (tree.is_leaf(x)) leaves.push_back(x);
                    if (tree.valence(x) == n) val_n.push_back(x);
                }
                // ordered selections of r distinct leaves for the arguments
                std::vector<int> args;
                std::function<void()> place_args = [&]() {
                    if (static_cast<int>(args.size()) == r) {
                        // subsets of valence-n vertices disjoint from the args
                        const std::size_t k = val_n.size();
                        for (std::size_t mask = 0; mask < (1u << k); ++mask) {
                            Marking m;
                            m.r = r;
                            m.n = n;
                            m.arg_vertex = args;
                            bool ok = true;
                            for (std::size_t i = 0; i < k; ++i)
                                if (mask & (1u << i)) {
                                    if (std::find(args.begin(), args.end(), val_n[i]) !=
                                        args.end()) {
                                        ok = false;
                                        break;
                                    }
                                    m.s_vertices.insert(val_n[i]);
                                }
                            if (!ok) continue;
                            fn(MarkedTree::make(tree, std::move(m)));
                        }
                        return;
                    }
                    for (int leaf : leaves) {
                        if (std::find(args.begin(), args.end(), leaf) != args.end()) continue;
                        args.push_back(leaf);
                        place_args();
                        args.pop_back();
                    }
                };
                place_args();
                return;
            }
            for (int p = 0; p < v; ++p) {
                parent[v] = p;
                shapes(v + 1);
            }
        };
        shapes(1);
    }
}

/* isomorphism classes (by brute force) of reduced marked trees that satisfy
 * the flags, grouped by |S|; trees above the vertex bound are simply not
 * generated */
inline std::map<int, std::vector<MarkedTree>> brute_reduced_classes(
    int r, int n, int max_s, opcx::trees::EnumFlags flags, int max_vertices) {
    std::map<int, std::vector<MarkedTree>> classes;
    std::map<std::string, std::vector<std::pair<int, std::size_t>>> by_key;
    for (int s = 0; s <= max_s; ++s) classes[s];
    for_each_marked_tree(r, n, max_vertices, [&](const MarkedTree& t) {
        if (t.s_count() > max_s) return;
        if (!opcx::trees::is_reduced(t)) return;
        for (int v = 0; v < t.tree().n_vertices(); ++v) {
            if (!t.is_o_vertex(v)) continue;
            if (!flags.allow_nullary && t.tree().is_leaf(v)) return;
            if (!flags.allow_unary && t.tree().valence(v) == 1) return;
        }
        const std::string key = cheap_key(t);
        for (const auto& [s, idx] : by_key[key])
            if (brute_iso(classes[s][idx], t)) return; // already represented
        by_key[key].emplace_back(t.s_count(), classes[t.s_count()].size());
        classes[t.s_count()].push_back(t);
    });
    return classes;
}

} // namespace oracle
