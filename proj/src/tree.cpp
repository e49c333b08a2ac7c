#include "opcx/tree.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace opcx::trees {

/* --- Tree / MarkedTree --- */

Tree Tree::from_parent(std::vector<int> parent) {
    Tree t;
    const int n = static_cast<int>(parent.size());
    if (n == 0) throw Error("tree must have at least one vertex");
    t.parent_ = std::move(parent);
    t.children_.assign(n, {});
    for (int v = 0; v < n; ++v) {
        const int p = t.parent_[v];
        if (p == -1) {
            if (t.root_ != -1) throw Error("tree has more than one root");
            t.root_ = v;
        } else if (p < 0 || p >= n || p == v) {
            throw Error("bad parent index");
        } else {
            t.children_[p].push_back(v);
        }
    }
    if (t.root_ == -1) throw Error("tree has no root");
    // no cycles: every vertex reaches the root in at most n steps
    for (int v = 0; v < n; ++v) {
        int cur = v, steps = 0;
        while (cur != t.root_) {
            cur = t.parent_[cur];
            if (++steps > n) throw Error("parent map contains a cycle");
        }
    }
    return t;
}

MarkedTree MarkedTree::make(Tree tree, Marking marking) {
    const int n_vertices = tree.n_vertices();
    if (marking.r != static_cast<int>(marking.arg_vertex.size()))
        throw Error("marking: r does not match the number of argument slots");
    std::set<int> seen;
    for (int v : marking.arg_vertex) {
        if (v < 0 || v >= n_vertices) throw Error("marking: argument vertex out of range");
        if (!tree.is_leaf(v)) throw Error("marking: argument slot on a non-leaf");
        if (!seen.insert(v).second) throw Error("marking: argument map is not injective");
    }
    for (int v : marking.s_vertices) {
        if (v < 0 || v >= n_vertices) throw Error("marking: S-vertex out of range");
        if (tree.valence(v) != marking.n)
            throw Error("marking: S-vertex does not have valence n");
        if (seen.count(v)) throw Error("marking: S and Arg intersect");
    }
    return MarkedTree(std::move(tree), std::move(marking));
}

std::optional<int> MarkedTree::arg_label(int v) const {
    for (int k = 0; k < marking_.r; ++k)
        if (marking_.arg_vertex[k] == v) return k + 1;
    return std::nullopt;
}

/* --- reduced condition --- */

bool is_reduced(const MarkedTree& t) {
    const Tree& tr = t.tree();
    for (int v = 0; v < tr.n_vertices(); ++v) {
        if (v == tr.root()) continue;
        // the arrow v -> parent(v): s(a) ∈ S, s(a) ∈ Arg, or t(a) ∈ S
        if (t.in_s(v) || t.arg_label(v) || t.in_s(tr.parent(v))) continue;
        return false;
    }
    return true;
}

/* --- canonical codes --- */

std::vector<CanonicalCode> subtree_codes(const MarkedTree& t) {
    const Tree& tr = t.tree();
    std::vector<CanonicalCode> codes(tr.n_vertices());
    std::function<void(int)> walk = [&](int v) {
        std::vector<std::string> child_codes;
        for (int c : tr.children(v)) {
            walk(c);
            child_codes.push_back(codes[c]);
        }
        std::sort(child_codes.begin(), child_codes.end());
        std::string kind = "o";
        if (t.in_s(v))
            kind = "s";
        else if (auto l = t.arg_label(v))
            kind = "a" + std::to_string(*l);
        std::string code = "(" + kind + ":";
        for (const auto& c : child_codes) code += c;
        code += ")";
        codes[v] = std::move(code);
    };
    walk(tr.root());
    return codes;
}

CanonicalCode canonical_code(const MarkedTree& t) {
    return subtree_codes(t)[t.tree().root()];
}

std::vector<int> canonical_children(const MarkedTree& t, int v) {
    const auto codes = subtree_codes(t);
    std::vector<int> kids = t.tree().children(v);
    std::sort(kids.begin(), kids.end(),
              [&](int a, int b) { return std::tie(codes[a], a) < std::tie(codes[b], b); });
    return kids;
}

std::vector<int> canonical_order(const MarkedTree& t) {
    const auto codes = subtree_codes(t);
    std::vector<int> order;
    std::function<void(int)> walk = [&](int v) {
        order.push_back(v);
        std::vector<int> kids = t.tree().children(v);
        std::sort(kids.begin(), kids.end(),
                  [&](int a, int b) { return std::tie(codes[a], a) < std::tie(codes[b], b); });
        for (int c : kids) walk(c);
    };
    walk(t.tree().root());
    return order;
}

/* --- automorphisms --- */

namespace {

// maps the subtree at a onto the subtree at b (equal codes assumed),
// matching children in canonical order
void match_subtrees(const MarkedTree& t, const std::vector<CanonicalCode>& codes, int a, int b,
                    std::vector<int>& perm) {
    perm[a] = b;
    auto sort_kids = [&](int v) {
        std::vector<int> kids = t.tree().children(v);
        std::sort(kids.begin(), kids.end(),
                  [&](int x, int y) { return std::tie(codes[x], x) < std::tie(codes[y], y); });
        return kids;
    };
    const auto ka = sort_kids(a), kb = sort_kids(b);
    for (std::size_t i = 0; i < ka.size(); ++i) match_subtrees(t, codes, ka[i], kb[i], perm);
}

} // namespace

AutGroup automorphisms(const MarkedTree& t) {
    const Tree& tr = t.tree();
    const auto codes = subtree_codes(t);
    AutGroup aut;
    for (int v = 0; v < tr.n_vertices(); ++v) {
        std::vector<int> kids = tr.children(v);
        std::sort(kids.begin(), kids.end(),
                  [&](int a, int b) { return std::tie(codes[a], a) < std::tie(codes[b], b); });
        std::size_t i = 0;
        while (i < kids.size()) {
            std::size_t j = i;
            while (j + 1 < kids.size() && codes[kids[j + 1]] == codes[kids[i]]) ++j;
            const std::uint64_t mult = j - i + 1;
            for (std::uint64_t f = 2; f <= mult; ++f) aut.order *= f;
            for (std::size_t k = i; k < j; ++k) {
                std::vector<int> perm(tr.n_vertices());
                for (int w = 0; w < tr.n_vertices(); ++w) perm[w] = w;
                match_subtrees(t, codes, kids[k], kids[k + 1], perm);
                match_subtrees(t, codes, kids[k + 1], kids[k], perm);
                aut.generators.push_back(std::move(perm));
            }
            i = j + 1;
        }
    }
    return aut;
}

/* --- enumeration --- */

namespace {

enum class Kind { O, S, Arg };

struct Shape {
    Kind kind;
    int arg_label = 0; // 1-based, Arg only
    std::vector<Shape> children;
    std::string code;
};

std::string shape_code(const Shape& s) {
    std::string kind = s.kind == Kind::O ? "o" : s.kind == Kind::S ? "s" : "a" + std::to_string(s.arg_label);
    std::vector<std::string> kid_codes;
    for (const auto& c : s.children) kid_codes.push_back(c.code);
    std::sort(kid_codes.begin(), kid_codes.end());
    std::string code = "(" + kind + ":";
    for (const auto& c : kid_codes) code += c;
    code += ")";
    return code;
}

struct ShapeWithUse {
    Shape shape;
    unsigned label_mask;
    int s_used;
};

struct Enumerator {
    int r, n;
    EnumFlags flags;
    // memo: (kind, label mask, s count) -> shapes
    std::map<std::tuple<int, unsigned, int>, std::vector<Shape>> memo;

    const std::vector<Shape>& subtrees(Kind kind, unsigned mask, int s_count) {
        const auto key = std::make_tuple(static_cast<int>(kind), mask, s_count);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        std::vector<Shape> out;
        switch (kind) {
            case Kind::Arg: {
                if (s_count == 0 && mask != 0 && (mask & (mask - 1)) == 0) {
                    int label = 1;
                    while (!(mask & (1u << (label - 1)))) ++label;
                    Shape s{Kind::Arg, label, {}, ""};
                    s.code = shape_code(s);
                    out.push_back(std::move(s));
                }
                break;
            }
            case Kind::S: {
                if (s_count >= 1) {
                    // root uses one S; exactly n children of any kind
                    for (auto& kids :
                         child_multisets(mask, s_count - 1, n, /*o_children_only_marked=*/false))
                        out.push_back(finish(Kind::S, 0, std::move(kids)));
                }
                break;
            }
            case Kind::O: {
                // children must be S- or Arg-rooted; count constrained by flags
                for (auto& kids : child_multisets(mask, s_count, -1, true)) {
                    const std::size_t k = kids.size();
                    if (k == 0 && !flags.allow_nullary) continue;
                    if (k == 1 && !flags.allow_unary) continue;
                    out.push_back(finish(Kind::O, 0, std::move(kids)));
                }
                break;
            }
        }
        return memo.emplace(key, std::move(out)).first->second;
    }

    Shape finish(Kind kind, int label, std::vector<Shape> kids) {
        std::sort(kids.begin(), kids.end(),
                  [](const Shape& a, const Shape& b) { return a.code < b.code; });
        Shape s{kind, label, std::move(kids), ""};
        s.code = shape_code(s);
        return s;
    }

    // all multisets of child subtrees consuming exactly (mask, s_count);
    // slots = -1 means "any number of children", otherwise exactly that many
    std::vector<std::vector<Shape>> child_multisets(unsigned mask, int s_count, int slots,
                                                    bool sa_rooted_only) {
        std::vector<ShapeWithUse> pool = build_pool(mask, s_count, sa_rooted_only);
        std::vector<std::vector<Shape>> result;
        std::vector<Shape> current;
        pick(pool, 0, mask, s_count, slots, current, result);
        return result;
    }

    std::vector<ShapeWithUse> build_pool(unsigned mask, int s_count, bool sa_rooted_only) {
        std::vector<ShapeWithUse> pool;
        // iterate submasks of mask (including 0) and s usage 0..s_count
        unsigned sub = mask;
        for (;;) {
            for (int su = 0; su <= s_count; ++su) {
                std::vector<Kind> kinds;
                kinds.push_back(Kind::S);
                kinds.push_back(Kind::Arg);
                if (!sa_rooted_only) kinds.push_back(Kind::O);
                for (Kind k : kinds) {
                    if (k != Kind::O && sub == 0 && su == 0) continue; // no free riders
                    for (const Shape& s : subtrees(k, sub, su))
                        pool.push_back({s, sub, su});
                }
            }
            if (sub == 0) break;
            sub = (sub - 1) & mask;
        }
        std::sort(pool.begin(), pool.end(),
                  [](const ShapeWithUse& a, const ShapeWithUse& b) { return a.shape.code < b.shape.code; });
        return pool;
    }

    void pick(const std::vector<ShapeWithUse>& pool, std::size_t from, unsigned mask, int s_count,
              int slots, std::vector<Shape>& current, std::vector<std::vector<Shape>>& result) {
        if (slots == 0 || (slots < 0 && mask == 0 && s_count == 0)) {
            if (mask == 0 && s_count == 0 && slots <= 0) result.push_back(current);
            if (slots == 0) return;
            // slots < 0 and resources exhausted: also allow adding more
            // zero-resource children (there are none: the pool's zero-resource
            // entries are bare unmarked vertices, only reachable as S-children,
            // where slots is fixed) — fall through is a no-op because every
            // remaining pick consumes resources
        }
        for (std::size_t i = from; i < pool.size(); ++i) {
            const auto& cand = pool[i];
            if ((cand.label_mask & mask) != cand.label_mask) continue;
            if (cand.s_used > s_count) continue;
            if (cand.label_mask == 0 && cand.s_used == 0 && slots < 0) continue; // would loop
            current.push_back(cand.shape);
            pick(pool, i, mask & ~cand.label_mask, s_count - cand.s_used, slots < 0 ? -1 : slots - 1,
                 current, result);
            current.pop_back();
        }
    }
};

MarkedTree shape_to_marked_tree(const Shape& root, int r, int n) {
    std::vector<int> parent;
    Marking marking;
    marking.r = r;
    marking.n = n;
    marking.arg_vertex.assign(r, -1);
    std::function<int(const Shape&, int)> place = [&](const Shape& s, int par) {
        const int v = static_cast<int>(parent.size());
        parent.push_back(par);
        if (s.kind == Kind::S) marking.s_vertices.insert(v);
        if (s.kind == Kind::Arg) marking.arg_vertex[s.arg_label - 1] = v;
        for (const auto& c : s.children) place(c, v);
        return v;
    };
    place(root, -1);
    return MarkedTree::make(Tree::from_parent(std::move(parent)), std::move(marking));
}

bool respects_flags(const MarkedTree& t, EnumFlags flags) {
    const Tree& tr = t.tree();
    for (int v = 0; v < tr.n_vertices(); ++v) {
        if (!t.is_o_vertex(v)) continue;
        if (!flags.allow_nullary && tr.is_leaf(v)) return false;
        if (!flags.allow_unary && tr.valence(v) == 1) return false;
    }
    return true;
}

} // namespace

std::map<int, std::vector<MarkedTree>> enumerate_reduced(int r, int n, int max_s,
                                                         EnumFlags flags) {
    if (r < 0 || n < 0 || max_s < 0) throw Error("enumerate_reduced: negative parameter");
    if (r > 20) throw Error("enumerate_reduced: r too large");
    Enumerator en{r, n, flags, {}};
    const unsigned full = r == 0 ? 0u : (1u << r) - 1u;
    std::map<int, std::vector<MarkedTree>> out;
    for (int s = 0; s <= max_s; ++s) {
        std::vector<Shape> shapes;
        if (r == 1 && s == 0) {
            Shape leaf{Kind::Arg, 1, {}, ""};
            leaf.code = shape_code(leaf);
            shapes.push_back(std::move(leaf));
        }
        for (const Shape& sh : en.subtrees(Kind::S, full, s)) shapes.push_back(sh);
        for (const Shape& sh : en.subtrees(Kind::O, full, s)) shapes.push_back(sh);

        std::map<CanonicalCode, MarkedTree> classes;
        for (const Shape& sh : shapes) {
            MarkedTree t = shape_to_marked_tree(sh, r, n);
            if (!is_reduced(t) || !respects_flags(t, flags)) continue; // defensive
            if (t.s_count() != s) continue;
            classes.emplace(canonical_code(t), std::move(t));
        }
        std::vector<MarkedTree> reps;
        for (auto& [code, t] : classes) reps.push_back(std::move(t));
        out.emplace(s, std::move(reps));
    }
    return out;
}

StructuralBound structural_bound(int r, int n, int s_count, EnumFlags flags) {
    // non-root unmarked vertices must have an S parent, so there are at most
    // n * s_count of them (plus possibly the root); for n = 0 the S-vertices
    // are leaves and cannot parent anything
    (void)flags;
    const std::size_t max_o = 1 + static_cast<std::size_t>(n) * static_cast<std::size_t>(s_count);
    const std::size_t max_vertices =
        max_o + static_cast<std::size_t>(s_count) + static_cast<std::size_t>(r);
    // unmarked vertices take children only in S ∪ Arg
    const std::size_t max_valence =
        std::max<std::size_t>(static_cast<std::size_t>(n),
                              static_cast<std::size_t>(s_count) + static_cast<std::size_t>(r));
    return {max_o, max_vertices, max_valence};
}

std::string render(const MarkedTree& t) {
    std::ostringstream os;
    std::function<void(int, int)> walk = [&](int v, int depth) {
        for (int i = 0; i < depth; ++i) os << "  ";
        if (t.in_s(v))
            os << "S";
        else if (auto l = t.arg_label(v))
            os << "arg#" << *l;
        else
            os << "O";
        os << " valence=" << t.tree().valence(v) << "\n";
        for (int c : canonical_children(t, v)) walk(c, depth + 1);
    };
    walk(t.tree().root(), 0);
    return os.str();
}

} // namespace opcx::trees
