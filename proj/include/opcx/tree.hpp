#pragma once

/* Rooted trees with (r,n)-markings, the reduced condition, canonical codes,
 * automorphism groups and the enumeration of isomorphism classes of reduced
 * marked trees.
 *
 * Arrows run from a vertex to its parent; the root is the unique vertex
 * without a parent, the valence |v| of a vertex is its number of children,
 * and the initial vertices are the leaves. A marking places r injectively
 * labeled argument slots on leaves and selects a set S of valence-n vertices;
 * the tree is reduced when every non-root vertex is in S or Arg, or has its
 * parent in S (equivalently: no arrow joins two unmarked vertices).
 */

#include "opcx/error.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace opcx::trees {

class Tree {
public:
    /// Builds from a parent vector (parent[root] == -1); validates that there
    /// is exactly one root and no cycles.
    static Tree from_parent(std::vector<int> parent);

    int n_vertices() const { return static_cast<int>(parent_.size()); }
    int root() const { return root_; }
    int parent(int v) const { return parent_[v]; }
    const std::vector<int>& children(int v) const { return children_[v]; }
    int valence(int v) const { return static_cast<int>(children_[v].size()); }
    bool is_leaf(int v) const { return children_[v].empty(); }

private:
    std::vector<int> parent_;
    std::vector<std::vector<int>> children_;
    int root_ = -1;
};

struct Marking {
    int r = 0;
    int n = 0;
    std::vector<int> arg_vertex; // size r; arg_vertex[k] hosts label k+1
    std::set<int> s_vertices;
};

class MarkedTree {
public:
    /// Validates the marking: arg injective into leaves, S of valence n,
    /// S and Arg disjoint.
    static MarkedTree make(Tree tree, Marking marking);

    const Tree& tree() const { return tree_; }
    const Marking& marking() const { return marking_; }
    int s_count() const { return static_cast<int>(marking_.s_vertices.size()); }
    bool in_s(int v) const { return marking_.s_vertices.count(v) > 0; }
    /// 1-based argument label carried by v, if any.
    std::optional<int> arg_label(int v) const;
    bool is_o_vertex(int v) const { return !in_s(v) && !arg_label(v); }

private:
    MarkedTree(Tree t, Marking m) : tree_(std::move(t)), marking_(std::move(m)) {}

    Tree tree_;
    Marking marking_;
};

using CanonicalCode = std::string;

bool is_reduced(const MarkedTree& t);

/// Isomorphism-invariant and isomorphism-separating code, built bottom-up
/// from (S-flag, arg-label, sorted child codes).
CanonicalCode canonical_code(const MarkedTree& t);

/// Codes of all subtrees, indexed by root vertex.
std::vector<CanonicalCode> subtree_codes(const MarkedTree& t);

/// All vertices in canonical traversal order: preorder from the root,
/// children visited in (subtree code, vertex index) order.
std::vector<int> canonical_order(const MarkedTree& t);

/// Children of v in (subtree code, vertex index) order.
std::vector<int> canonical_children(const MarkedTree& t, int v);

struct AutGroup {
    std::vector<std::vector<int>> generators; // vertex permutations
    std::uint64_t order = 1;
};

/// Generators are transpositions of adjacent isomorphic sibling subtrees;
/// the order is the product of factorials of repeated-subtree multiplicities.
AutGroup automorphisms(const MarkedTree& t);

struct EnumFlags {
    bool allow_nullary = true; // initial vertices outside S ∪ Arg permitted
    bool allow_unary = true;   // valence-1 vertices outside S permitted
};

/// One representative per isomorphism class of reduced (r,n)-marked trees
/// with |S| <= max_s, grouped by |S| (every key 0..max_s present) and sorted
/// by canonical code.
std::map<int, std::vector<MarkedTree>> enumerate_reduced(int r, int n, int max_s,
                                                         EnumFlags flags);

struct StructuralBound {
    std::size_t max_o_vertices;
    std::size_t max_vertices;
    std::size_t max_valence;
};

/// Proven bounds for reduced (r,n)-marked trees with |S| = s_count: every
/// non-root unmarked vertex has its parent in S, every unmarked vertex's
/// children lie in S ∪ Arg.
StructuralBound structural_bound(int r, int n, int s_count, EnumFlags flags);

/// Indented text rendering, one vertex per line (valence, S-flag, arg label).
std::string render(const MarkedTree& t);

} // namespace opcx::trees
