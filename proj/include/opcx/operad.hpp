#pragma once

/* Symmetric collections (the underlying data of an operad), the built-in
 * operads, and the assembly of coproduct components: for each reduced
 * (r,n)-marked tree T the complex
 *
 *     ⨂_{unmarked v} O(|v|) ⊗ M^{⊗|S|} / Aut(T)
 *
 * (valence-1 unmarked vertices contribute the reduced part of O(1)), and the
 * truncated arity-r coproduct with its inclusion from O(r).
 */

#include "opcx/complex.hpp"
#include "opcx/tree.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace opcx::ops {

using chain::ChainMap;
using chain::Complex;
using exact::RingDesc;

/* Arity-indexed complexes with symmetric-group actions given by adjacent
 * transposition generators (an empty generator list means the trivial
 * action), and a designated unit basis vector in arity 1 splitting O(1) as
 * unit line ⊕ reduced part. Components absent within the declared arity
 * range are zero; reading past the range is an error. */
class SymmetricCollection {
public:
    static SymmetricCollection make(RingDesc ring, int max_arity,
                                    std::map<int, Complex> components,
                                    std::map<int, std::vector<ChainMap>> actions,
                                    std::string unit_label);

    const RingDesc& ring() const { return ring_; }
    int max_arity() const { return max_arity_; }
    const std::string& unit_label() const { return unit_label_; }

    const Complex& component(int arity) const;
    /// Adjacent transposition generators s_1..s_{m-1}; empty = trivial action.
    const std::vector<ChainMap>& action_generators(int arity) const;

    /// The complement of the unit line in O(1).
    const Complex& reduced_unary() const { return reduced_unary_; }

    bool has_nullary() const { return !component(0).is_zero_complex(); }
    bool has_reduced_unary() const { return !reduced_unary_.is_zero_complex(); }

private:
    SymmetricCollection(RingDesc ring, Complex zero)
        : ring_(ring), zero_(std::move(zero)), reduced_unary_(zero_) {}

    RingDesc ring_;
    int max_arity_ = 0;
    std::map<int, Complex> components_;
    std::map<int, std::vector<ChainMap>> actions_;
    std::string unit_label_;
    Complex zero_;
    Complex reduced_unary_;
};

/// unit | com | com-nonunital | assoc-nonunital, with components materialized
/// up to max_arity.
SymmetricCollection builtin_operad(const std::string& name, RingDesc ring, int max_arity);

/* The generating collection: a complex M placed in arity n with the trivial
 * symmetric-group action. */
struct GeneratorCollection {
    int n = 0;
    Complex m_complex;
};

/// M = cone(id) shifted by s, placed in arity n.
GeneratorCollection make_generator_collection(RingDesc ring, int n, int s);

/* One tree summand of the coproduct: the ordered tensor product over the
 * canonical factor order (unmarked vertices first, then S-vertices) and its
 * Aut(T)-coinvariants. */
struct TreeComponent {
    trees::MarkedTree tree;
    trees::CanonicalCode code;
    int s_count = 0;
    std::uint64_t aut_order = 1;
    std::vector<int> factor_order;          // contributing vertices
    Complex raw;
    std::vector<ChainMap> action_generators; // Aut(T) transpositions on raw
    Complex component;
    ChainMap projection;                     // raw -> component
};

TreeComponent tree_component(const SymmetricCollection& o, const GeneratorCollection& gen,
                             const trees::MarkedTree& t);

/* The |S| <= max_s truncation of the arity-r coproduct component: direct sum
 * of tree components in (|S|, code) order, with the inclusion of O(r) onto
 * the |S| = 0 block. */
struct CoproductTruncation {
    int r = 0;
    int max_s = 0;
    std::vector<TreeComponent> parts;
    Complex total;
    std::vector<ChainMap> part_injections; // component -> total
    ChainMap inclusion;                    // O(r) -> total
    Complex s0_block;                      // direct sum of the |S| = 0 components
    ChainMap s0_projection;                // total -> s0_block
};

CoproductTruncation coproduct_component(const SymmetricCollection& o,
                                        const GeneratorCollection& gen, int n, int r, int max_s);

struct ComponentVerdict {
    trees::CanonicalCode code;
    int r = 0;
    int s_count = 0;
    std::uint64_t aut_order = 1;
    std::map<int, std::size_t> dims;
    chain::HomologyProfile homology;
    bool acyclic = true;
};

struct InclusionCheck {
    int r = 0;
    bool all_acyclic = true; // over components with |S| >= 1
    std::vector<ComponentVerdict> records;
};

/// Records acyclicity of every |S| >= 1 component; the inclusion is a
/// quasi-isomorphism up to the truncation iff all of them are acyclic.
InclusionCheck check_inclusion_qiso(const SymmetricCollection& o, const GeneratorCollection& gen,
                                    int n, int r, int max_s);

} // namespace opcx::ops
