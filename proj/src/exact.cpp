#include "opcx/exact.hpp"

#include <algorithm>
#include <sstream>

namespace opcx::exact {

bool is_prime(unsigned long p) {
    if (p < 2) return false;
    for (unsigned long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

RingDesc RingDesc::prime_field(unsigned long p) {
    if (!is_prime(p)) throw Error("prime_field: " + std::to_string(p) + " is not prime");
    return RingDesc(RingKind::PrimeField, p);
}

RingDesc RingDesc::parse(const std::string& text) {
    if (text == "Q") return rationals();
    if (text == "Z") return integers();
    if (text.rfind("Fp:", 0) == 0) {
        const std::string num = text.substr(3);
        if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos)
            throw Error("bad ring spec: " + text);
        return prime_field(std::stoul(num));
    }
    throw Error("bad ring spec: " + text + " (expected Q, Fp:<p> or Z)");
}

unsigned long RingDesc::prime() const {
    if (kind_ != RingKind::PrimeField) throw Error("prime(): not a prime field");
    return p_;
}

std::string RingDesc::str() const {
    switch (kind_) {
        case RingKind::Rationals: return "Q";
        case RingKind::PrimeField: return "Fp:" + std::to_string(p_);
        case RingKind::Integers: return "Z";
    }
    return "?";
}

/* --- Scalar --- */

Scalar::Scalar(RingDesc ring, long value) : ring_(ring), v_(value) { canonicalize(); }
Scalar::Scalar(RingDesc ring, const mpz_class& value) : ring_(ring), v_(value) { canonicalize(); }

Scalar::Scalar(RingDesc ring, const mpq_class& value) : ring_(ring), v_(value) {
    v_.canonicalize();
    if (ring_.kind() != RingKind::Rationals && v_.get_den() != 1) {
        if (ring_.kind() == RingKind::Integers)
            throw Error("non-integral scalar over Z: " + v_.get_str());
        // F_p: divide by the (invertible) denominator
        mpz_class den_inv;
        mpz_class p(ring_.prime());
        if (mpz_invert(den_inv.get_mpz_t(), v_.get_den().get_mpz_t(), p.get_mpz_t()) == 0)
            throw Error("denominator not invertible mod p: " + v_.get_str());
        v_ = mpq_class(v_.get_num() * den_inv);
    }
    canonicalize();
}

void Scalar::canonicalize() {
    v_.canonicalize();
    if (ring_.kind() == RingKind::PrimeField) {
        mpz_class p(ring_.prime());
        mpz_class r;
        mpz_fdiv_r(r.get_mpz_t(), v_.get_num().get_mpz_t(), p.get_mpz_t());
        v_ = mpq_class(r);
    }
}

Scalar Scalar::parse(RingDesc ring, const std::string& text) {
    if (text.empty()) throw Error("empty scalar");
    mpq_class q;
    if (q.set_str(text, 10) != 0) throw Error("bad scalar: " + text);
    return Scalar(ring, q);
}

mpz_class Scalar::integer() const {
    if (v_.get_den() != 1) throw Error("scalar is not integral: " + v_.get_str());
    return v_.get_num();
}

void Scalar::require_same_ring(const Scalar& o) const {
    if (!(ring_ == o.ring_))
        throw Error("ring mismatch: " + ring_.str() + " vs " + o.ring_.str());
}

Scalar Scalar::operator-() const {
    Scalar r = *this;
    r.v_ = -r.v_;
    r.canonicalize();
    return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
    require_same_ring(o);
    v_ += o.v_;
    canonicalize();
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
    require_same_ring(o);
    v_ -= o.v_;
    canonicalize();
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
    require_same_ring(o);
    v_ *= o.v_;
    canonicalize();
    return *this;
}

Scalar Scalar::inverse() const {
    if (is_zero()) throw Error("inverse of zero");
    switch (ring_.kind()) {
        case RingKind::Rationals:
            return Scalar(ring_, mpq_class(1) / v_);
        case RingKind::PrimeField: {
            mpz_class inv, p(ring_.prime());
            if (mpz_invert(inv.get_mpz_t(), v_.get_num().get_mpz_t(), p.get_mpz_t()) == 0)
                throw Error("not invertible mod p");
            return Scalar(ring_, inv);
        }
        case RingKind::Integers:
            throw UnsupportedRing("inverse over Z");
    }
    throw Error("unreachable");
}

std::string Scalar::str() const { return v_.get_str(); }

/* --- ExactMatrix --- */

ExactMatrix::ExactMatrix(RingDesc ring, std::size_t rows, std::size_t cols)
    : ring_(ring), rows_(rows), cols_(cols) {}

ExactMatrix ExactMatrix::identity(RingDesc ring, std::size_t n) {
    ExactMatrix m(ring, n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, Scalar::one(ring));
    return m;
}

Scalar ExactMatrix::get(std::size_t i, std::size_t j) const {
    auto it = entries_.find({i, j});
    return it == entries_.end() ? Scalar::zero(ring_) : it->second;
}

void ExactMatrix::set(std::size_t i, std::size_t j, const Scalar& s) {
    if (i >= rows_ || j >= cols_) throw Error("matrix index out of range");
    if (!(s.ring() == ring_)) throw Error("scalar/matrix ring mismatch");
    if (s.is_zero())
        entries_.erase({i, j});
    else
        entries_.insert_or_assign({i, j}, s);
}

void ExactMatrix::add_at(std::size_t i, std::size_t j, const Scalar& s) {
    set(i, j, get(i, j) + s);
}

ExactMatrix ExactMatrix::transpose() const {
    ExactMatrix t(ring_, cols_, rows_);
    for (const auto& [pos, s] : entries_) t.set(pos.second, pos.first, s);
    return t;
}

ExactMatrix ExactMatrix::operator*(const ExactMatrix& o) const {
    if (!(ring_ == o.ring_)) throw Error("matrix ring mismatch");
    if (cols_ != o.rows_) throw Error("matrix shape mismatch in product");
    ExactMatrix r(ring_, rows_, o.cols_);
    for (const auto& [pos, a] : entries_) {
        const auto [i, k] = pos;
        auto it = o.entries_.lower_bound({k, 0});
        auto end = o.entries_.lower_bound({k + 1, 0});
        for (; it != end; ++it) r.add_at(i, it->first.second, a * it->second);
    }
    return r;
}

ExactMatrix ExactMatrix::operator+(const ExactMatrix& o) const {
    if (!(ring_ == o.ring_) || rows_ != o.rows_ || cols_ != o.cols_)
        throw Error("matrix mismatch in sum");
    ExactMatrix r = *this;
    for (const auto& [pos, s] : o.entries_) r.add_at(pos.first, pos.second, s);
    return r;
}

ExactMatrix ExactMatrix::operator-(const ExactMatrix& o) const {
    return *this + o.scaled(-Scalar::one(ring_));
}

ExactMatrix ExactMatrix::scaled(const Scalar& s) const {
    ExactMatrix r(ring_, rows_, cols_);
    for (const auto& [pos, a] : entries_) r.set(pos.first, pos.second, a * s);
    return r;
}

ExactMatrix ExactMatrix::cast_to(RingDesc target) const {
    ExactMatrix r(target, rows_, cols_);
    for (const auto& [pos, a] : entries_)
        r.set(pos.first, pos.second, Scalar(target, a.value()));
    return r;
}

std::string ExactMatrix::str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < rows_; ++i) {
        os << (i == 0 ? "[" : " ") << "[";
        for (std::size_t j = 0; j < cols_; ++j)
            os << (j ? " " : "") << get(i, j).str();
        os << "]" << (i + 1 == rows_ ? "]" : "\n");
    }
    if (rows_ == 0) os << "[]";
    return os.str();
}

/* --- field elimination --- */

namespace {

std::vector<std::vector<Scalar>> densify(const ExactMatrix& m) {
    std::vector<std::vector<Scalar>> d(m.rows(),
                                       std::vector<Scalar>(m.cols(), Scalar::zero(m.ring())));
    for (const auto& [pos, s] : m.entries()) d[pos.first][pos.second] = s;
    return d;
}

void require_field(const ExactMatrix& m, const char* op) {
    if (!m.ring().is_field())
        throw UnsupportedRing(std::string(op) + " requires a field ring (use smith_normal_form over Z)");
}

} // namespace

Rref rref(const ExactMatrix& m) {
    require_field(m, "rref");
    auto a = densify(m);
    const std::size_t rows = m.rows(), cols = m.cols();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = rows;
        for (std::size_t i = r; i < rows; ++i)
            if (!a[i][c].is_zero()) { piv = i; break; }
        if (piv == rows) continue;
        std::swap(a[r], a[piv]);
        const Scalar inv = a[r][c].inverse();
        for (std::size_t j = c; j < cols; ++j) a[r][j] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c].is_zero()) continue;
            const Scalar f = a[i][c];
            for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    ExactMatrix out(m.ring(), rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (!a[i][j].is_zero()) out.set(i, j, a[i][j]);
    return {std::move(out), std::move(pivots)};
}

std::size_t rank(const ExactMatrix& m) {
    require_field(m, "rank");
    return rref(m).pivots.size();
}

std::vector<std::vector<Scalar>> kernel_basis(const ExactMatrix& m) {
    require_field(m, "kernel_basis");
    const Rref r = rref(m);
    const auto& piv = r.pivots;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0, pi = 0; c < m.cols(); ++c) {
        if (pi < piv.size() && piv[pi] == c)
            ++pi;
        else
            free_cols.push_back(c);
    }
    std::vector<std::vector<Scalar>> basis;
    for (std::size_t f : free_cols) {
        std::vector<Scalar> v(m.cols(), Scalar::zero(m.ring()));
        v[f] = Scalar::one(m.ring());
        for (std::size_t k = 0; k < piv.size(); ++k)
            v[piv[k]] = -r.matrix.get(k, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

Scalar determinant(const ExactMatrix& m) {
    if (m.rows() != m.cols()) throw Error("determinant of non-square matrix");
    const RingDesc field =
        m.ring().kind() == RingKind::Integers ? RingDesc::rationals() : m.ring();
    auto a = densify(m.cast_to(field));
    const std::size_t n = m.rows();
    Scalar det = Scalar::one(field);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = n;
        for (std::size_t i = c; i < n; ++i)
            if (!a[i][c].is_zero()) { piv = i; break; }
        if (piv == n) return Scalar(m.ring(), 0);
        if (piv != c) {
            std::swap(a[c], a[piv]);
            det = -det;
        }
        det *= a[c][c];
        const Scalar inv = a[c][c].inverse();
        for (std::size_t i = c + 1; i < n; ++i) {
            if (a[i][c].is_zero()) continue;
            const Scalar f = a[i][c] * inv;
            for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
        }
    }
    return Scalar(m.ring(), det.value());
}

/* --- Smith normal form --- */

namespace {

struct DenseZ {
    std::size_t rows, cols;
    std::vector<std::vector<mpz_class>> a;
};

void swap_rows(DenseZ& m, std::size_t i, std::size_t j) { std::swap(m.a[i], m.a[j]); }

void swap_cols(DenseZ& m, std::size_t i, std::size_t j) {
    for (std::size_t r = 0; r < m.rows; ++r) std::swap(m.a[r][i], m.a[r][j]);
}

// row_i += c * row_j
void row_op(DenseZ& m, std::size_t i, std::size_t j, const mpz_class& c) {
    for (std::size_t k = 0; k < m.cols; ++k) m.a[i][k] += c * m.a[j][k];
}

// col_i += c * col_j
void col_op(DenseZ& m, std::size_t i, std::size_t j, const mpz_class& c) {
    for (std::size_t r = 0; r < m.rows; ++r) m.a[r][i] += c * m.a[r][j];
}

void negate_row(DenseZ& m, std::size_t i) {
    for (auto& x : m.a[i]) x = -x;
}

} // namespace

Snf smith_normal_form(const ExactMatrix& m) {
    if (m.ring().kind() != RingKind::Integers)
        throw UnsupportedRing("smith_normal_form requires ring Z");
    const std::size_t rows = m.rows(), cols = m.cols();
    DenseZ a{rows, cols, std::vector<std::vector<mpz_class>>(rows, std::vector<mpz_class>(cols, 0))};
    for (const auto& [pos, s] : m.entries()) a.a[pos.first][pos.second] = s.integer();
    DenseZ u{rows, rows, std::vector<std::vector<mpz_class>>(rows, std::vector<mpz_class>(rows, 0))};
    DenseZ v{cols, cols, std::vector<std::vector<mpz_class>>(cols, std::vector<mpz_class>(cols, 0))};
    for (std::size_t i = 0; i < rows; ++i) u.a[i][i] = 1;
    for (std::size_t i = 0; i < cols; ++i) v.a[i][i] = 1;

    const std::size_t steps = std::min(rows, cols);
    for (std::size_t t = 0; t < steps; ++t) {
        // smallest-absolute-value nonzero pivot in the trailing block
        std::size_t pi = rows, pj = cols;
        mpz_class best;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j) {
                if (a.a[i][j] == 0) continue;
                mpz_class ab = abs(a.a[i][j]);
                if (pi == rows || ab < best) {
                    best = ab;
                    pi = i;
                    pj = j;
                }
            }
        if (pi == rows) break; // trailing block is zero
        if (pi != t) { swap_rows(a, t, pi); swap_rows(u, t, pi); }
        if (pj != t) { swap_cols(a, t, pj); swap_cols(v, t, pj); }

        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (a.a[i][t] == 0) continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), a.a[i][t].get_mpz_t(), a.a[t][t].get_mpz_t());
                row_op(a, i, t, -q);
                row_op(u, i, t, -q);
                if (a.a[i][t] != 0) {
                    // remainder is smaller than the pivot: promote it
                    swap_rows(a, t, i);
                    swap_rows(u, t, i);
                    clean = false;
                }
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (a.a[t][j] == 0) continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), a.a[t][j].get_mpz_t(), a.a[t][t].get_mpz_t());
                col_op(a, j, t, -q);
                col_op(v, j, t, -q);
                if (a.a[t][j] != 0) {
                    swap_cols(a, t, j);
                    swap_cols(v, t, j);
                    clean = false;
                }
            }
            if (!clean) continue;
            // pivot must divide the whole trailing block
            bool divides = true;
            for (std::size_t i = t + 1; i < rows && divides; ++i)
                for (std::size_t j = t + 1; j < cols && divides; ++j)
                    if (a.a[i][j] % a.a[t][t] != 0) {
                        row_op(a, t, i, 1);
                        row_op(u, t, i, 1);
                        divides = false;
                    }
            if (divides) break;
        }
        if (a.a[t][t] < 0) {
            negate_row(a, t);
            negate_row(u, t);
        }
    }

    Snf out{ExactMatrix(m.ring(), rows, cols), ExactMatrix(m.ring(), rows, rows),
            ExactMatrix(m.ring(), cols, cols), {}};
    for (std::size_t t = 0; t < steps; ++t)
        if (a.a[t][t] != 0) {
            out.d.set(t, t, Scalar(m.ring(), a.a[t][t]));
            out.invariant_factors.push_back(a.a[t][t]);
        }
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < rows; ++j)
            if (u.a[i][j] != 0) out.u.set(i, j, Scalar(m.ring(), u.a[i][j]));
    // v was accumulated as column operations on the identity: that is exactly V
    for (std::size_t i = 0; i < cols; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (v.a[i][j] != 0) out.v.set(i, j, Scalar(m.ring(), v.a[i][j]));
    return out;
}

} // namespace opcx::exact
