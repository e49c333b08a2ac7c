#pragma once

/* Bounded chain complexes of finitely generated free modules with labeled
 * bases, chain maps, group actions, and the constructors and analyses used
 * throughout: shift, cone, tensor, direct sum, coinvariants, homology,
 * acyclicity and quasi-isomorphism tests.
 *
 * Grading is homological: the differential lowers degree by one. d^2 = 0 and
 * chain-map commutation are asserted exactly at every construction.
 */

#include "opcx/exact.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace opcx::chain {

using exact::ExactMatrix;
using exact::RingDesc;
using exact::Scalar;

class Complex {
public:
    /// Validates shapes and d∘d = 0; empty degrees and zero differentials are
    /// normalized away.
    static Complex make(RingDesc ring, std::map<int, std::vector<std::string>> basis,
                        std::map<int, ExactMatrix> differentials);
    static Complex zero(RingDesc ring) { return make(ring, {}, {}); }

    const RingDesc& ring() const { return ring_; }
    const std::map<int, std::vector<std::string>>& basis() const { return basis_; }

    std::size_t dim(int degree) const;
    std::map<int, std::size_t> dims() const;
    /// Degrees with nonzero dimension, increasing.
    std::vector<int> degrees() const;
    bool is_zero_complex() const { return basis_.empty(); }

    const std::vector<std::string>& labels(int degree) const;
    /// Index of a label within a degree; throws if absent.
    std::size_t index_of(int degree, const std::string& label) const;

    /// d_i : C_i -> C_{i-1}, materialized with the right shape.
    ExactMatrix differential(int degree) const;

    friend bool operator==(const Complex&, const Complex&) = default;

private:
    Complex(RingDesc ring) : ring_(ring) {}

    RingDesc ring_;
    std::map<int, std::vector<std::string>> basis_;
    std::map<int, ExactMatrix> d_;
};

class ChainMap {
public:
    /// Validates shapes and degreewise commutation with the differentials.
    static ChainMap make(Complex source, Complex target, std::map<int, ExactMatrix> components);

    const Complex& source() const { return source_; }
    const Complex& target() const { return target_; }
    /// f_i : source_i -> target_i, materialized with the right shape.
    ExactMatrix component(int degree) const;

    friend bool operator==(const ChainMap&, const ChainMap&) = default;

private:
    ChainMap(Complex s, Complex t) : source_(std::move(s)), target_(std::move(t)) {}

    Complex source_, target_;
    std::map<int, ExactMatrix> comps_;
};

ChainMap identity_map(const Complex& c);
ChainMap zero_map(const Complex& source, const Complex& target);
/// f ∘ g (g first); requires g.target == f.source.
ChainMap compose(const ChainMap& f, const ChainMap& g);
/// Degreewise invertible over the ring (unimodular over Z).
bool is_iso(const ChainMap& f);

/* A group acting on a complex through chain self-maps. Generators must be
 * degreewise invertible; declared_order is the order of the group they
 * generate. */
struct GroupAction {
    Complex complex;
    std::vector<ChainMap> generators;
    std::uint64_t declared_order = 1;

    bool is_trivial() const;
};

/* Free rank per degree plus torsion invariant factors (Z only). */
class HomologyProfile {
public:
    void set(int degree, std::size_t free_rank, std::vector<mpz_class> torsion);
    std::size_t free_rank(int degree) const;
    const std::vector<mpz_class>& torsion(int degree) const;
    bool is_zero() const { return data_.empty(); }
    /// Degrees carrying nonzero homology.
    std::vector<int> degrees() const;

    friend bool operator==(const HomologyProfile&, const HomologyProfile&) = default;

    std::string str() const;

private:
    // degree -> (free rank, torsion factors); absent = zero
    std::map<int, std::pair<std::size_t, std::vector<mpz_class>>> data_;
    static const std::vector<mpz_class> empty_torsion_;
};

/* --- constructors --- */

Complex unit_complex(RingDesc ring);
Complex shift(const Complex& c, int s);
Complex cone(const ChainMap& f);
Complex tensor(const Complex& a, const Complex& b);

struct DirectSum {
    Complex total;
    std::vector<ChainMap> injections;
};
DirectSum direct_sum(RingDesc ring, const std::vector<Complex>& parts);

struct Coinvariants {
    Complex complex;
    ChainMap projection;
};
/// Quotient by the span of x - g·x over all generators g. Requires a field
/// ring unless the action is trivial.
Coinvariants coinvariants(const GroupAction& action);

/* --- analyses --- */

HomologyProfile homology(const Complex& c);
bool is_acyclic(const Complex& c);
bool is_quasi_iso(const ChainMap& f);

} // namespace opcx::chain
