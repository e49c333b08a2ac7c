#include "opcx/complex.hpp"

#include <algorithm>
#include <sstream>

namespace opcx::chain {

/* --- Complex --- */

Complex Complex::make(RingDesc ring, std::map<int, std::vector<std::string>> basis,
                      std::map<int, ExactMatrix> differentials) {
    Complex c(ring);
    for (auto& [deg, labels] : basis)
        if (!labels.empty()) c.basis_.emplace(deg, std::move(labels));
    for (auto& [deg, m] : differentials) {
        if (!(m.ring() == ring)) throw Error("differential ring mismatch");
        const std::size_t src = c.dim(deg), tgt = c.dim(deg - 1);
        if (m.rows() != tgt || m.cols() != src)
            throw Error("differential shape mismatch in degree " + std::to_string(deg));
        if (!m.is_zero()) c.d_.emplace(deg, std::move(m));
    }
    for (const auto& [deg, m] : c.d_) {
        if (c.d_.count(deg + 1) && !(m * c.d_.at(deg + 1)).is_zero())
            throw Error("d∘d != 0 between degrees " + std::to_string(deg + 1) + " and " +
                        std::to_string(deg - 1));
    }
    return c;
}

std::size_t Complex::dim(int degree) const {
    auto it = basis_.find(degree);
    return it == basis_.end() ? 0 : it->second.size();
}

std::map<int, std::size_t> Complex::dims() const {
    std::map<int, std::size_t> d;
    for (const auto& [deg, labels] : basis_) d[deg] = labels.size();
    return d;
}

std::vector<int> Complex::degrees() const {
    std::vector<int> out;
    for (const auto& [deg, labels] : basis_) out.push_back(deg);
    return out;
}

const std::vector<std::string>& Complex::labels(int degree) const {
    static const std::vector<std::string> none;
    auto it = basis_.find(degree);
    return it == basis_.end() ? none : it->second;
}

std::size_t Complex::index_of(int degree, const std::string& label) const {
    const auto& ls = labels(degree);
    auto it = std::find(ls.begin(), ls.end(), label);
    if (it == ls.end())
        throw Error("label '" + label + "' not found in degree " + std::to_string(degree));
    return static_cast<std::size_t>(it - ls.begin());
}

ExactMatrix Complex::differential(int degree) const {
    auto it = d_.find(degree);
    if (it != d_.end()) return it->second;
    return ExactMatrix(ring_, dim(degree - 1), dim(degree));
}

/* --- ChainMap --- */

ChainMap ChainMap::make(Complex source, Complex target, std::map<int, ExactMatrix> components) {
    if (!(source.ring() == target.ring())) throw Error("chain map ring mismatch");
    ChainMap f(std::move(source), std::move(target));
    for (auto& [deg, m] : components) {
        if (!(m.ring() == f.source_.ring())) throw Error("chain map component ring mismatch");
        if (m.rows() != f.target_.dim(deg) || m.cols() != f.source_.dim(deg))
            throw Error("chain map component shape mismatch in degree " + std::to_string(deg));
        if (!m.is_zero()) f.comps_.emplace(deg, std::move(m));
    }
    // commutation d^target ∘ f = f ∘ d^source, in every degree where either side can be nonzero
    std::vector<int> degs;
    for (int d : f.source_.degrees()) degs.push_back(d);
    for (const auto& [deg, m] : f.comps_) degs.push_back(deg);
    for (int deg : degs) {
        const ExactMatrix lhs = f.target_.differential(deg) * f.component(deg);
        const ExactMatrix rhs = f.component(deg - 1) * f.source_.differential(deg);
        if (!(lhs == rhs))
            throw Error("chain map does not commute with differentials in degree " +
                        std::to_string(deg));
    }
    return f;
}

ExactMatrix ChainMap::component(int degree) const {
    auto it = comps_.find(degree);
    if (it != comps_.end()) return it->second;
    return ExactMatrix(source_.ring(), target_.dim(degree), source_.dim(degree));
}

ChainMap identity_map(const Complex& c) {
    std::map<int, ExactMatrix> comps;
    for (int deg : c.degrees())
        comps.emplace(deg, ExactMatrix::identity(c.ring(), c.dim(deg)));
    return ChainMap::make(c, c, std::move(comps));
}

ChainMap zero_map(const Complex& source, const Complex& target) {
    return ChainMap::make(source, target, {});
}

ChainMap compose(const ChainMap& f, const ChainMap& g) {
    if (!(g.target() == f.source())) throw Error("compose: maps are not composable");
    std::map<int, ExactMatrix> comps;
    for (int deg : g.source().degrees()) comps.emplace(deg, f.component(deg) * g.component(deg));
    return ChainMap::make(g.source(), f.target(), std::move(comps));
}

bool is_iso(const ChainMap& f) {
    std::vector<int> degs = f.source().degrees();
    for (int d : f.target().degrees()) degs.push_back(d);
    for (int deg : degs) {
        const std::size_t n = f.source().dim(deg);
        if (n != f.target().dim(deg)) return false;
        if (n == 0) continue;
        const ExactMatrix m = f.component(deg);
        if (f.source().ring().is_field()) {
            if (exact::rank(m) != n) return false;
        } else {
            const auto det = exact::determinant(m).integer();
            if (det != 1 && det != -1) return false;
        }
    }
    return true;
}

bool GroupAction::is_trivial() const {
    for (const auto& g : generators)
        for (int deg : complex.degrees())
            if (!(g.component(deg) == ExactMatrix::identity(complex.ring(), complex.dim(deg))))
                return false;
    return true;
}

/* --- HomologyProfile --- */

const std::vector<mpz_class> HomologyProfile::empty_torsion_{};

void HomologyProfile::set(int degree, std::size_t free_rank, std::vector<mpz_class> torsion) {
    if (free_rank == 0 && torsion.empty()) {
        data_.erase(degree);
        return;
    }
    data_[degree] = {free_rank, std::move(torsion)};
}

std::size_t HomologyProfile::free_rank(int degree) const {
    auto it = data_.find(degree);
    return it == data_.end() ? 0 : it->second.first;
}

const std::vector<mpz_class>& HomologyProfile::torsion(int degree) const {
    auto it = data_.find(degree);
    return it == data_.end() ? empty_torsion_ : it->second.second;
}

std::vector<int> HomologyProfile::degrees() const {
    std::vector<int> out;
    for (const auto& [deg, entry] : data_) out.push_back(deg);
    return out;
}

std::string HomologyProfile::str() const {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (const auto& [deg, entry] : data_) {
        if (!first) os << ", ";
        first = false;
        os << deg << ": Z^" << entry.first;
        for (const auto& t : entry.second) os << " + Z/" << t.get_str();
    }
    os << "}";
    return os.str();
}

/* --- constructors --- */

Complex unit_complex(RingDesc ring) {
    return Complex::make(ring, {{0, {"e"}}}, {});
}

Complex shift(const Complex& c, int s) {
    std::map<int, std::vector<std::string>> basis;
    std::map<int, ExactMatrix> diffs;
    for (const auto& [deg, labels] : c.basis()) basis[deg + s] = labels;
    for (int deg : c.degrees()) {
        const ExactMatrix d = c.differential(deg);
        if (!d.is_zero()) diffs.emplace(deg + s, d);
    }
    return Complex::make(c.ring(), std::move(basis), std::move(diffs));
}

Complex cone(const ChainMap& f) {
    const Complex& x = f.source();
    const Complex& y = f.target();
    const RingDesc ring = x.ring();
    std::map<int, std::vector<std::string>> basis;
    std::vector<int> degs;
    for (int d : y.degrees()) degs.push_back(d);
    for (int d : x.degrees()) degs.push_back(d + 1);
    for (int deg : degs) {
        if (basis.count(deg)) continue;
        std::vector<std::string> labels;
        for (const auto& l : y.labels(deg)) labels.push_back("y:" + l);
        for (const auto& l : x.labels(deg - 1)) labels.push_back("x:" + l);
        if (!labels.empty()) basis[deg] = std::move(labels);
    }
    // d(y, x) = (dy + f(x), -dx)
    std::map<int, ExactMatrix> diffs;
    for (const auto& [deg, labels] : basis) {
        const std::size_t ys = y.dim(deg), xs = x.dim(deg - 1);
        const std::size_t yt = y.dim(deg - 1), xt = x.dim(deg - 2);
        ExactMatrix m(ring, yt + xt, ys + xs);
        const ExactMatrix dy = y.differential(deg);
        for (const auto& [pos, s] : dy.entries()) m.set(pos.first, pos.second, s);
        const ExactMatrix fc = f.component(deg - 1);
        for (const auto& [pos, s] : fc.entries()) m.set(pos.first, ys + pos.second, s);
        const ExactMatrix dx = x.differential(deg - 1);
        for (const auto& [pos, s] : dx.entries()) m.set(yt + pos.first, ys + pos.second, -s);
        if (!m.is_zero()) diffs.emplace(deg, std::move(m));
    }
    return Complex::make(ring, std::move(basis), std::move(diffs));
}

namespace {

// global basis order of a complex: degree ascending, index ascending
std::vector<std::pair<int, std::size_t>> global_basis(const Complex& c) {
    std::vector<std::pair<int, std::size_t>> out;
    for (int deg : c.degrees())
        for (std::size_t i = 0; i < c.dim(deg); ++i) out.emplace_back(deg, i);
    return out;
}

} // namespace

Complex tensor(const Complex& a, const Complex& b) {
    if (!(a.ring() == b.ring())) throw Error("tensor: ring mismatch");
    const RingDesc ring = a.ring();
    const auto ga = global_basis(a), gb = global_basis(b);

    // basis of degree n: pairs (x, y), |x|+|y| = n, lexicographic in (x, y)
    std::map<int, std::vector<std::pair<std::size_t, std::size_t>>> pairs;
    std::map<int, std::vector<std::string>> basis;
    for (std::size_t i = 0; i < ga.size(); ++i)
        for (std::size_t j = 0; j < gb.size(); ++j) {
            const int deg = ga[i].first + gb[j].first;
            pairs[deg].emplace_back(i, j);
            basis[deg].push_back("(" + a.labels(ga[i].first)[ga[i].second] + "⊗" +
                                 b.labels(gb[j].first)[gb[j].second] + ")");
        }
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> pos_in_degree;
    for (const auto& [deg, v] : pairs)
        for (std::size_t k = 0; k < v.size(); ++k) pos_in_degree[v[k]] = k;

    std::map<std::pair<int, std::size_t>, std::size_t> ga_pos, gb_pos;
    for (std::size_t i = 0; i < ga.size(); ++i) ga_pos[ga[i]] = i;
    for (std::size_t j = 0; j < gb.size(); ++j) gb_pos[gb[j]] = j;

    // d(x⊗y) = dx⊗y + (-1)^{|x|} x⊗dy
    std::map<int, ExactMatrix> diffs;
    for (const auto& [deg, v] : pairs) {
        auto lower = pairs.find(deg - 1);
        if (lower == pairs.end()) continue;
        ExactMatrix m(ring, lower->second.size(), v.size());
        for (std::size_t k = 0; k < v.size(); ++k) {
            const auto [i, j] = v[k];
            const auto [dx_deg, dx_idx] = ga[i];
            const auto [dy_deg, dy_idx] = gb[j];
            const ExactMatrix da = a.differential(dx_deg);
            for (std::size_t r = 0; r < da.rows(); ++r) {
                const Scalar s = da.get(r, dx_idx);
                if (s.is_zero()) continue;
                const std::size_t i2 = ga_pos.at({dx_deg - 1, r});
                m.add_at(pos_in_degree.at({i2, j}), k, s);
            }
            const ExactMatrix db = b.differential(dy_deg);
            const Scalar sign(ring, dx_deg % 2 == 0 ? 1 : -1);
            for (std::size_t r = 0; r < db.rows(); ++r) {
                const Scalar s = db.get(r, dy_idx);
                if (s.is_zero()) continue;
                const std::size_t j2 = gb_pos.at({dy_deg - 1, r});
                m.add_at(pos_in_degree.at({i, j2}), k, sign * s);
            }
        }
        if (!m.is_zero()) diffs.emplace(deg, std::move(m));
    }
    return Complex::make(ring, std::move(basis), std::move(diffs));
}

DirectSum direct_sum(RingDesc ring, const std::vector<Complex>& parts) {
    std::map<int, std::vector<std::string>> basis;
    std::map<int, std::vector<std::size_t>> offsets; // per degree, per part
    for (std::size_t p = 0; p < parts.size(); ++p) {
        if (!(parts[p].ring() == ring)) throw Error("direct_sum: ring mismatch");
    }
    // fix the set of degrees first so offsets are consistent
    std::map<int, std::size_t> total_dim;
    for (const auto& part : parts)
        for (int deg : part.degrees()) total_dim[deg] += part.dim(deg);
    for (const auto& [deg, n] : total_dim) {
        basis[deg] = {};
        basis[deg].reserve(n);
    }
    for (std::size_t p = 0; p < parts.size(); ++p) {
        for (auto& [deg, labels] : basis) {
            offsets[deg].push_back(labels.size());
            for (const auto& l : parts[p].labels(deg))
                labels.push_back("p" + std::to_string(p) + ":" + l);
        }
    }
    std::map<int, ExactMatrix> diffs;
    for (const auto& [deg, labels] : basis) {
        ExactMatrix m(ring, total_dim.count(deg - 1) ? total_dim.at(deg - 1) : 0, labels.size());
        for (std::size_t p = 0; p < parts.size(); ++p) {
            const ExactMatrix d = parts[p].differential(deg);
            const std::size_t ro = m.rows() ? offsets.at(deg - 1)[p] : 0;
            const std::size_t co = offsets.at(deg)[p];
            for (const auto& [pos, s] : d.entries()) m.set(ro + pos.first, co + pos.second, s);
        }
        if (!m.is_zero()) diffs.emplace(deg, std::move(m));
    }
    Complex total = Complex::make(ring, std::move(basis), std::move(diffs));
    std::vector<ChainMap> injections;
    for (std::size_t p = 0; p < parts.size(); ++p) {
        std::map<int, ExactMatrix> comps;
        for (int deg : parts[p].degrees()) {
            ExactMatrix m(ring, total.dim(deg), parts[p].dim(deg));
            const std::size_t off = offsets.at(deg)[p];
            for (std::size_t i = 0; i < parts[p].dim(deg); ++i)
                m.set(off + i, i, Scalar::one(ring));
            comps.emplace(deg, std::move(m));
        }
        injections.push_back(ChainMap::make(parts[p], total, std::move(comps)));
    }
    return {std::move(total), std::move(injections)};
}

/* --- coinvariants --- */

Coinvariants coinvariants(const GroupAction& action) {
    const Complex& c = action.complex;
    const RingDesc ring = c.ring();
    for (const auto& g : action.generators)
        if (!(g.source() == c) || !(g.target() == c))
            throw Error("coinvariants: generator is not a self map of the complex");
    if (action.generators.empty() || action.is_trivial())
        return {c, identity_map(c)};
    if (!ring.is_field())
        throw UnsupportedRing("coinvariants of a nontrivial action over Z");

    struct DegData {
        std::vector<std::size_t> free_rows;
        ExactMatrix proj; // quotient dim x dim
    };
    std::map<int, DegData> data;
    std::map<int, std::vector<std::string>> qbasis;
    for (int deg : c.degrees()) {
        const std::size_t n = c.dim(deg);
        // columns x - g·x for every basis element x and generator g
        ExactMatrix k(ring, n, n * action.generators.size());
        std::size_t col = 0;
        for (const auto& g : action.generators) {
            const ExactMatrix gm = g.component(deg);
            for (std::size_t j = 0; j < n; ++j, ++col) {
                k.add_at(j, col, Scalar::one(ring));
                for (std::size_t i = 0; i < n; ++i) {
                    const Scalar s = gm.get(i, j);
                    if (!s.is_zero()) k.add_at(i, col, -s);
                }
            }
        }
        // column echelon via rref of the transpose; pivot rows of k are the
        // pivot columns of k^T
        const exact::Rref r = exact::rref(k.transpose());
        const auto& piv = r.pivots;
        std::vector<std::size_t> free_rows;
        for (std::size_t i = 0, pi = 0; i < n; ++i) {
            if (pi < piv.size() && piv[pi] == i)
                ++pi;
            else
                free_rows.push_back(i);
        }
        ExactMatrix proj(ring, free_rows.size(), n);
        for (std::size_t fi = 0; fi < free_rows.size(); ++fi)
            proj.set(fi, free_rows[fi], Scalar::one(ring));
        for (std::size_t k2 = 0; k2 < piv.size(); ++k2)
            for (std::size_t fi = 0; fi < free_rows.size(); ++fi) {
                const Scalar s = r.matrix.get(k2, free_rows[fi]);
                if (!s.is_zero()) proj.set(fi, piv[k2], -s);
            }
        std::vector<std::string> labels;
        for (std::size_t i : free_rows) labels.push_back(c.labels(deg)[i]);
        if (!labels.empty()) qbasis[deg] = std::move(labels);
        data.emplace(deg, DegData{std::move(free_rows), std::move(proj)});
    }
    // induced differential: project d applied to the free-row lifts
    std::map<int, ExactMatrix> qdiffs;
    for (int deg : c.degrees()) {
        if (!data.count(deg - 1)) continue;
        const auto& src = data.at(deg);
        const auto& tgt = data.at(deg - 1);
        ExactMatrix lift(ring, c.dim(deg), src.free_rows.size());
        for (std::size_t fi = 0; fi < src.free_rows.size(); ++fi)
            lift.set(src.free_rows[fi], fi, Scalar::one(ring));
        ExactMatrix m = tgt.proj * (c.differential(deg) * lift);
        if (!m.is_zero()) qdiffs.emplace(deg, std::move(m));
    }
    Complex quotient = Complex::make(ring, std::move(qbasis), std::move(qdiffs));
    std::map<int, ExactMatrix> pcomps;
    for (int deg : c.degrees()) pcomps.emplace(deg, data.at(deg).proj);
    ChainMap projection = ChainMap::make(c, quotient, std::move(pcomps));
    return {std::move(quotient), std::move(projection)};
}

/* --- analyses --- */

HomologyProfile homology(const Complex& c) {
    HomologyProfile profile;
    if (c.ring().is_field()) {
        for (int deg : c.degrees()) {
            const std::size_t n = c.dim(deg);
            const std::size_t r_out = exact::rank(c.differential(deg));
            const std::size_t r_in = exact::rank(c.differential(deg + 1));
            profile.set(deg, n - r_out - r_in, {});
        }
        return profile;
    }
    std::map<int, exact::Snf> snfs;
    auto snf_of = [&](int deg) -> const exact::Snf& {
        auto it = snfs.find(deg);
        if (it == snfs.end()) it = snfs.emplace(deg, exact::smith_normal_form(c.differential(deg))).first;
        return it->second;
    };
    for (int deg : c.degrees()) {
        const std::size_t n = c.dim(deg);
        const std::size_t r_out = snf_of(deg).invariant_factors.size();
        const auto& in_factors = snf_of(deg + 1).invariant_factors;
        std::vector<mpz_class> torsion;
        for (const auto& f : in_factors)
            if (f > 1) torsion.push_back(f);
        profile.set(deg, n - r_out - in_factors.size(), std::move(torsion));
    }
    return profile;
}

bool is_acyclic(const Complex& c) { return homology(c).is_zero(); }

bool is_quasi_iso(const ChainMap& f) { return is_acyclic(cone(f)); }

} // namespace opcx::chain
