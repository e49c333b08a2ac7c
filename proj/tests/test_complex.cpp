#include "seeded_main.hpp"

#include "opcx/complex.hpp"

#include "gen.hpp"

#include <random>
#include <set>

using namespace opcx;
using namespace opcx::chain;
using exact::RingDesc;
using exact::Scalar;
using exact::ExactMatrix;

namespace {

const RingDesc Q = RingDesc::rationals();
const RingDesc F2 = RingDesc::prime_field(2);
const RingDesc F3 = RingDesc::prime_field(3);
const RingDesc Z = RingDesc::integers();

Complex cone_id_unit(RingDesc ring) { return cone(identity_map(unit_complex(ring))); }

ChainMap mult_by(RingDesc ring, long k) {
    const Complex u = unit_complex(ring);
    std::map<int, ExactMatrix> comp;
    ExactMatrix m(ring, 1, 1);
    m.set(0, 0, Scalar(ring, k));
    comp.emplace(0, std::move(m));
    return ChainMap::make(u, u, std::move(comp));
}

bool same_dims_and_differentials(const Complex& a, const Complex& b) {
    if (a.dims() != b.dims()) return false;
    for (int deg : a.degrees())
        if (!(a.differential(deg) == b.differential(deg))) return false;
    return true;
}

/* Independent quasi-isomorphism oracle over a field: equal homology ranks and
 * full-rank induced maps, computed from kernels and images directly. */
bool oracle_quasi_iso(const ChainMap& f) {
    const Complex& x = f.source();
    const Complex& y = f.target();
    std::set<int> degs;
    for (int d : x.degrees()) degs.insert(d);
    for (int d : y.degrees()) degs.insert(d);
    for (int deg : degs) {
        const auto zx = exact::kernel_basis(x.differential(deg));
        const std::size_t hx = zx.size() - exact::rank(x.differential(deg + 1));
        const std::size_t hy = y.dim(deg) - exact::rank(y.differential(deg)) -
                               exact::rank(y.differential(deg + 1));
        if (hx != hy) return false;
        // rank of the induced map: rank [f(Z) | B] - rank B
        const ExactMatrix b = y.differential(deg + 1);
        ExactMatrix stacked(x.ring(), y.dim(deg), zx.size() + b.cols());
        const ExactMatrix fc = f.component(deg);
        for (std::size_t k = 0; k < zx.size(); ++k)
            for (std::size_t i = 0; i < y.dim(deg); ++i) {
                Scalar acc = Scalar::zero(x.ring());
                for (std::size_t j = 0; j < x.dim(deg); ++j) acc += fc.get(i, j) * zx[k][j];
                if (!acc.is_zero()) stacked.set(i, k, acc);
            }
        for (const auto& [pos, s] : b.entries()) stacked.set(pos.first, zx.size() + pos.second, s);
        const std::size_t induced = exact::rank(stacked) - exact::rank(b);
        if (induced != hx) return false;
    }
    return true;
}

} // namespace

TEST_CASE("unit complex") {
    for (const RingDesc ring : {Q, F2, Z}) {
        const Complex u = unit_complex(ring);
        CHECK(u.dims() == std::map<int, std::size_t>{{0, 1}});
        const HomologyProfile h = homology(u);
        CHECK(h.free_rank(0) == 1);
        CHECK(h.torsion(0).empty());
    }
}

TEST_CASE("complex construction validates d∘d = 0 and shapes") {
    ExactMatrix d1(Q, 1, 1);
    d1.set(0, 0, Scalar(Q, 1));
    ExactMatrix d2(Q, 1, 1);
    d2.set(0, 0, Scalar(Q, 1));
    CHECK_THROWS_AS(Complex::make(Q, {{0, {"a"}}, {1, {"b"}}, {2, {"c"}}},
                                  {{1, d1}, {2, d2}}),
                    Error);
    CHECK_THROWS_AS(Complex::make(Q, {{0, {"a", "b"}}, {1, {"c"}}}, {{1, d1}}), Error);
    CHECK_THROWS_AS(Complex::make(Q, {{0, {"a"}}}, {{0, ExactMatrix(Z, 0, 1)}}), Error);
}

TEST_CASE("shift") {
    CHECK(shift(unit_complex(Q), 3).dims() == std::map<int, std::size_t>{{3, 1}});
    std::mt19937 rng(testseed::base + 10);
    for (int iter = 0; iter < 20; ++iter) {
        const auto rc = testgen::random_complex(iter % 2 ? Q : F3, rng);
        CHECK(shift(rc.complex, 0) == rc.complex);
        const int s = static_cast<int>(rng() % 5) - 2;
        const HomologyProfile before = homology(rc.complex);
        const HomologyProfile after = homology(shift(rc.complex, s));
        for (int deg = -8; deg < 12; ++deg) CHECK(after.free_rank(deg) == before.free_rank(deg - s));
    }
}

TEST_CASE("cone") {
    SUBCASE("cone of the identity is acyclic with dims {0:1, 1:1}") {
        const Complex c = cone_id_unit(Q);
        CHECK(c.dims() == std::map<int, std::size_t>{{0, 1}, {1, 1}});
        CHECK(c.differential(1).get(0, 0).is_one());
        CHECK(is_acyclic(c));
    }
    SUBCASE("cone of a zero map out of the zero complex is the target") {
        std::mt19937 rng(testseed::base + 11);
        const auto rc = testgen::random_complex(Q, rng);
        const Complex c = cone(zero_map(Complex::zero(Q), rc.complex));
        CHECK(same_dims_and_differentials(c, rc.complex));
    }
    SUBCASE("cone of multiplication by 2 over Z has Z/2 in degree 0") {
        const HomologyProfile h = homology(cone(mult_by(Z, 2)));
        CHECK(h.free_rank(0) == 0);
        REQUIRE(h.torsion(0).size() == 1);
        CHECK(h.torsion(0)[0] == 2);
        CHECK(h.free_rank(1) == 0);
    }
}

TEST_CASE("tensor") {
    SUBCASE("unit is a tensor unit") {
        std::mt19937 rng(testseed::base + 12);
        const auto rc = testgen::random_complex(F3, rng);
        const Complex t = tensor(unit_complex(F3), rc.complex);
        CHECK(same_dims_and_differentials(t, rc.complex));
    }
    SUBCASE("M⊗M for M = cone(id)") {
        const Complex m = cone_id_unit(Q);
        const Complex t = tensor(m, m);
        CHECK(t.dims() == std::map<int, std::size_t>{{0, 1}, {1, 2}, {2, 1}});
        CHECK(is_acyclic(t));
    }
    SUBCASE("ring mismatch is rejected") {
        CHECK_THROWS_AS(tensor(unit_complex(Q), unit_complex(F2)), Error);
    }
    SUBCASE("Künneth rank identity on random pairs over F3 and Q") {
        std::mt19937 rng(testseed::base + 13);
        for (const RingDesc ring : {F3, Q}) {
            for (int iter = 0; iter < 60; ++iter) {
                const auto a = testgen::random_complex(ring, rng, 2, 2);
                const auto b = testgen::random_complex(ring, rng, 2, 2);
                const HomologyProfile ha = homology(a.complex);
                const HomologyProfile hb = homology(b.complex);
                const HomologyProfile ht = homology(tensor(a.complex, b.complex));
                for (int n = -1; n < 8; ++n) {
                    std::size_t expected = 0;
                    for (int i = -2; i < 8; ++i)
                        expected += ha.free_rank(i) * hb.free_rank(n - i);
                    CHECK(ht.free_rank(n) == expected);
                }
            }
        }
    }
}

TEST_CASE("direct sum") {
    SUBCASE("empty sum is the zero complex") {
        CHECK(direct_sum(Q, {}).total.is_zero_complex());
    }
    SUBCASE("sum with the zero complex changes nothing") {
        std::mt19937 rng(testseed::base + 14);
        const auto rc = testgen::random_complex(Q, rng);
        const DirectSum s = direct_sum(Q, {rc.complex, Complex::zero(Q)});
        CHECK(same_dims_and_differentials(s.total, rc.complex));
        CHECK(s.injections.size() == 2);
    }
    SUBCASE("dims add degreewise") {
        std::mt19937 rng(testseed::base + 15);
        for (int iter = 0; iter < 10; ++iter) {
            const auto a = testgen::random_complex(F2, rng);
            const auto b = testgen::random_complex(F2, rng);
            const DirectSum s = direct_sum(F2, {a.complex, b.complex});
            for (int deg = -2; deg < 10; ++deg)
                CHECK(s.total.dim(deg) == a.complex.dim(deg) + b.complex.dim(deg));
            // injections are split: full column rank degreewise
            for (int deg : a.complex.degrees())
                CHECK(exact::rank(s.injections[0].component(deg)) == a.complex.dim(deg));
        }
    }
}

TEST_CASE("homology") {
    CHECK(homology(cone_id_unit(Z)).is_zero());
    CHECK(homology(cone_id_unit(F2)).is_zero());
    CHECK(homology(unit_complex(Q)).free_rank(0) == 1);
    SUBCASE("random complexes with known free ranks") {
        std::mt19937 rng(testseed::base + 16);
        for (int iter = 0; iter < 25; ++iter) {
            for (const RingDesc ring : {Q, F2, Z}) {
                const auto rc = testgen::random_complex(ring, rng);
                const HomologyProfile h = homology(rc.complex);
                for (int deg = -2; deg < 10; ++deg) {
                    const auto it = rc.expected_free.find(deg);
                    CHECK(h.free_rank(deg) == (it == rc.expected_free.end() ? 0 : it->second));
                }
            }
        }
    }
    SUBCASE("torsion over Z via random conjugated torsion pieces") {
        std::mt19937 rng(testseed::base + 17);
        for (int iter = 0; iter < 20; ++iter) {
            const auto rc = testgen::random_complex(Z, rng, 3, 2, true);
            const HomologyProfile h = homology(rc.complex);
            for (int deg = -2; deg < 10; ++deg) {
                const auto it = rc.expected_free.find(deg);
                CHECK(h.free_rank(deg) == (it == rc.expected_free.end() ? 0 : it->second));
                for (const auto& t : h.torsion(deg)) CHECK(t == 2);
            }
        }
    }
}

TEST_CASE("acyclicity") {
    CHECK(is_acyclic(cone_id_unit(Q)));
    CHECK(!is_acyclic(unit_complex(Q)));
    std::mt19937 rng(testseed::base + 18);
    for (int iter = 0; iter < 10; ++iter) {
        const auto rc = testgen::random_complex(F3, rng);
        CHECK(is_acyclic(tensor(cone_id_unit(F3), rc.complex)));
    }
}

TEST_CASE("quasi-isomorphism") {
    SUBCASE("stated examples") {
        const Complex u = unit_complex(Z);
        CHECK(is_quasi_iso(identity_map(u)));
        CHECK(is_quasi_iso(zero_map(Complex::zero(Z), cone_id_unit(Z))));
        CHECK(!is_quasi_iso(mult_by(Z, 2)));
    }
    SUBCASE("agrees with the rank-comparison oracle on random field cases") {
        std::mt19937 rng(testseed::base + 19);
        for (int iter = 0; iter < 40; ++iter) {
            const RingDesc ring = iter % 2 ? Q : F3;
            const auto a = testgen::random_complex(ring, rng, 2, 2);
            const auto filler = testgen::random_complex(ring, rng, 2, 2);
            const DirectSum s = direct_sum(ring, {a.complex, filler.complex});
            // inclusion of the first summand: qiso iff the filler is acyclic
            const ChainMap& inc = s.injections[0];
            CHECK(is_quasi_iso(inc) == oracle_quasi_iso(inc));
            CHECK(is_quasi_iso(inc) == is_acyclic(filler.complex));
            // projection onto the first summand
            std::map<int, ExactMatrix> comps;
            for (int deg : s.total.degrees())
                comps.emplace(deg, inc.component(deg).transpose());
            const ChainMap proj = ChainMap::make(s.total, a.complex, std::move(comps));
            CHECK(is_quasi_iso(proj) == oracle_quasi_iso(proj));
        }
    }
}

TEST_CASE("coinvariants") {
    SUBCASE("trivial action returns the complex with the identity projection") {
        std::mt19937 rng(testseed::base + 20);
        const auto rc = testgen::random_complex(Z, rng);
        const GroupAction act{rc.complex, {identity_map(rc.complex)}, 1};
        const Coinvariants q = coinvariants(act);
        CHECK(q.complex == rc.complex);
        CHECK(q.projection == identity_map(rc.complex));
    }
    SUBCASE("Koszul swap on M⊗M over F2: classes b⊗b, a⊗b, a⊗a all survive") {
        const Complex m = cone_id_unit(F2);
        const Complex t = tensor(m, m);
        const GroupAction act{t, {testgen::koszul_swap(m, t)}, 2};
        const Coinvariants q = coinvariants(act);
        CHECK(q.complex.dims() == std::map<int, std::size_t>{{0, 1}, {1, 1}, {2, 1}});
        const HomologyProfile h = homology(q.complex);
        CHECK(h.free_rank(0) == 0);
        CHECK(h.free_rank(1) == 0);
        CHECK(h.free_rank(2) == 1);
    }
    SUBCASE("same over Q: a⊗a dies and the quotient is acyclic") {
        const Complex m = cone_id_unit(Q);
        const Complex t = tensor(m, m);
        const GroupAction act{t, {testgen::koszul_swap(m, t)}, 2};
        const Coinvariants q = coinvariants(act);
        CHECK(q.complex.dims() == std::map<int, std::size_t>{{0, 1}, {1, 1}});
        CHECK(is_acyclic(q.complex));
    }
    SUBCASE("nontrivial action over Z is rejected") {
        const Complex m = cone_id_unit(Z);
        const Complex t = tensor(m, m);
        const GroupAction act{t, {testgen::koszul_swap(m, t)}, 2};
        CHECK_THROWS_AS(coinvariants(act), UnsupportedRing);
    }
    SUBCASE("projection is surjective and kills x - g·x") {
        const Complex m = cone_id_unit(F3);
        const Complex t = tensor(m, m);
        const ChainMap g = testgen::koszul_swap(m, t);
        const GroupAction act{t, {g}, 2};
        const Coinvariants q = coinvariants(act);
        for (int deg : t.degrees()) {
            CHECK(exact::rank(q.projection.component(deg)) == q.complex.dim(deg));
            const ExactMatrix one_minus_g =
                ExactMatrix::identity(F3, t.dim(deg)) - g.component(deg);
            CHECK((q.projection.component(deg) * one_minus_g).is_zero());
        }
    }
}

namespace {

/* dim (H_i)_G from the matrices of the generators on homology, solved by
 * brute-force linear algebra over Q. */
std::size_t homology_coinvariants_dim(const Complex& x, const std::vector<ChainMap>& gens,
                                      int deg) {
    const RingDesc ring = x.ring();
    const auto z = exact::kernel_basis(x.differential(deg));
    const ExactMatrix b = x.differential(deg + 1);
    const std::size_t n = x.dim(deg);
    // representatives: columns of Z that extend a column basis of B
    ExactMatrix bz(ring, n, b.cols() + z.size());
    for (const auto& [pos, s] : b.entries()) bz.set(pos.first, pos.second, s);
    for (std::size_t k = 0; k < z.size(); ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (!z[k][i].is_zero()) bz.set(i, b.cols() + k, z[k][i]);
    const auto piv = exact::rref(bz).pivots;
    std::vector<std::size_t> rep_cols;
    for (std::size_t c : piv)
        if (c >= b.cols()) rep_cols.push_back(c - b.cols());
    const std::size_t h = rep_cols.size();
    if (h == 0) return 0;
    ExactMatrix reps(ring, n, h);
    for (std::size_t k = 0; k < h; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (!z[rep_cols[k]][i].is_zero()) reps.set(i, k, z[rep_cols[k]][i]);
    // solve [reps | B] x = g*rep_k; the reps-part of x is the matrix of g on H
    ExactMatrix frame(ring, n, h + b.cols());
    for (const auto& [pos, s] : reps.entries()) frame.set(pos.first, pos.second, s);
    for (const auto& [pos, s] : b.entries()) frame.set(pos.first, h + pos.second, s);
    ExactMatrix relations(ring, h, h * gens.size());
    for (std::size_t gi = 0; gi < gens.size(); ++gi) {
        const ExactMatrix gr = gens[gi].component(deg) * reps;
        ExactMatrix aug(ring, n, frame.cols() + h);
        for (const auto& [pos, s] : frame.entries()) aug.set(pos.first, pos.second, s);
        for (const auto& [pos, s] : gr.entries()) aug.set(pos.first, frame.cols() + pos.second, s);
        const exact::Rref rr = exact::rref(aug);
        // read coordinates: for each rhs column, coefficients sit in the pivot rows
        for (std::size_t k = 0; k < h; ++k) {
            for (std::size_t pi = 0; pi < rr.pivots.size(); ++pi) {
                const std::size_t pc = rr.pivots[pi];
                if (pc >= frame.cols()) continue; // inconsistent system would pivot in rhs
                if (pc < h) {
                    const Scalar coeff = rr.matrix.get(pi, frame.cols() + k);
                    if (!coeff.is_zero()) relations.add_at(pc, h * gi + k, coeff);
                }
            }
            // relation column: M_g e_k - e_k
            relations.add_at(k, h * gi + k, -Scalar::one(ring));
        }
    }
    return h - exact::rank(relations);
}

} // namespace

TEST_CASE("over Q, homology of coinvariants equals coinvariants of homology") {
    std::mt19937 rng(testseed::base + 21);
    SUBCASE("Koszul swap, |G| = 2") {
        for (int iter = 0; iter < 8; ++iter) {
            const auto a = testgen::random_complex(Q, rng, 2, 2);
            const Complex t = tensor(a.complex, a.complex);
            if (t.is_zero_complex()) continue;
            const ChainMap g = testgen::koszul_swap(a.complex, t);
            const Coinvariants q = coinvariants({t, {g}, 2});
            const HomologyProfile hq = homology(q.complex);
            for (int deg = -2; deg < 10; ++deg)
                CHECK(hq.free_rank(deg) == homology_coinvariants_dim(t, {g}, deg));
        }
    }
    SUBCASE("block permutations, |G| = 6") {
        for (int iter = 0; iter < 6; ++iter) {
            const auto a = testgen::random_complex(Q, rng, 2, 2);
            const DirectSum s = direct_sum(Q, {a.complex, a.complex, a.complex});
            if (s.total.is_zero_complex()) continue;
            auto block_swap = [&](std::size_t i, std::size_t j) {
                std::map<int, ExactMatrix> comps;
                for (int deg : s.total.degrees()) {
                    ExactMatrix m(Q, s.total.dim(deg), s.total.dim(deg));
                    for (std::size_t p = 0; p < 3; ++p) {
                        const std::size_t q2 = p == i ? j : p == j ? i : p;
                        const ExactMatrix contrib = s.injections[q2].component(deg) *
                                                    s.injections[p].component(deg).transpose();
                        for (const auto& [pos, sc] : contrib.entries())
                            m.add_at(pos.first, pos.second, sc);
                    }
                    comps.emplace(deg, std::move(m));
                }
                return ChainMap::make(s.total, s.total, std::move(comps));
            };
            const std::vector<ChainMap> gens{block_swap(0, 1), block_swap(1, 2)};
            const Coinvariants q = coinvariants({s.total, gens, 6});
            const HomologyProfile hq = homology(q.complex);
            for (int deg = -2; deg < 10; ++deg)
                CHECK(hq.free_rank(deg) == homology_coinvariants_dim(s.total, gens, deg));
            // three identified copies: the quotient is one copy
            for (int deg = -2; deg < 10; ++deg)
                CHECK(hq.free_rank(deg) == homology(a.complex).free_rank(deg));
        }
    }
}

TEST_CASE("chain map validation and iso checks") {
    const Complex u = unit_complex(Z);
    CHECK(is_iso(identity_map(u)));
    CHECK(!is_iso(mult_by(Z, 2)));
    CHECK(is_iso(mult_by(Z, -1)));
    CHECK(is_iso(mult_by(Q, 7)));
    // a non-commuting square is rejected
    const Complex m = cone_id_unit(Q);
    std::map<int, ExactMatrix> bad;
    ExactMatrix b0(Q, 1, 1);
    b0.set(0, 0, Scalar(Q, 1));
    bad.emplace(0, std::move(b0)); // identity in degree 0, zero in degree 1: not a chain map
    CHECK_THROWS_AS(ChainMap::make(m, m, std::move(bad)), Error);
}
