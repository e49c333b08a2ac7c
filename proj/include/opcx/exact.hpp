#pragma once

/* Exact coefficient arithmetic over Q, F_p and Z, and the matrix algorithms
 * (rank, kernel, reduced echelon forms, Smith normal form) that all homology
 * computations rest on. Everything is immutable after construction and exact:
 * no floating point anywhere.
 */

#include "opcx/error.hpp"

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace opcx {
namespace exact {

enum class RingKind { Rationals, PrimeField, Integers };

bool is_prime(unsigned long p);

class RingDesc {
public:
    static RingDesc rationals() { return RingDesc(RingKind::Rationals, 0); }
    static RingDesc prime_field(unsigned long p);
    static RingDesc integers() { return RingDesc(RingKind::Integers, 0); }

    /// Parses "Q", "Fp:<p>" or "Z".
    static RingDesc parse(const std::string& text);

    RingKind kind() const { return kind_; }
    unsigned long prime() const;
    bool is_field() const { return kind_ != RingKind::Integers; }
    std::string str() const;

    friend bool operator==(const RingDesc&, const RingDesc&) = default;

private:
    RingDesc(RingKind k, unsigned long p) : kind_(k), p_(p) {}

    RingKind kind_;
    unsigned long p_;
};

/* An element of Q, F_p or Z in canonical form: reduced fraction over Q,
 * residue in [0, p) over F_p, arbitrary-precision integer over Z. Equality
 * is representational equality. */
class Scalar {
public:
    Scalar(RingDesc ring, long value);
    Scalar(RingDesc ring, const mpz_class& value);
    Scalar(RingDesc ring, const mpq_class& value);

    static Scalar zero(RingDesc ring) { return Scalar(ring, 0); }
    static Scalar one(RingDesc ring) { return Scalar(ring, 1); }
    /// Parses "n" or "p/q".
    static Scalar parse(RingDesc ring, const std::string& text);

    const RingDesc& ring() const { return ring_; }
    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }

    /// The canonical representative as a rational (denominator 1 except over Q).
    const mpq_class& value() const { return v_; }
    /// Integer value; requires denominator 1.
    mpz_class integer() const;

    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }

    /// Multiplicative inverse; fields only, nonzero only.
    Scalar inverse() const;
    /// a / b over a field.
    friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }

    friend bool operator==(const Scalar& a, const Scalar& b) {
        return a.ring_ == b.ring_ && a.v_ == b.v_;
    }

    std::string str() const;

private:
    void canonicalize();
    void require_same_ring(const Scalar& o) const;

    RingDesc ring_;
    mpq_class v_;
};

/* Sparse exact matrix; entries are stored row-major, absent = zero. */
class ExactMatrix {
public:
    ExactMatrix(RingDesc ring, std::size_t rows, std::size_t cols);
    static ExactMatrix identity(RingDesc ring, std::size_t n);

    const RingDesc& ring() const { return ring_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nnz() const { return entries_.size(); }
    bool is_zero() const { return entries_.empty(); }

    Scalar get(std::size_t i, std::size_t j) const;
    void set(std::size_t i, std::size_t j, const Scalar& s);
    void add_at(std::size_t i, std::size_t j, const Scalar& s);

    const std::map<std::pair<std::size_t, std::size_t>, Scalar>& entries() const {
        return entries_;
    }

    ExactMatrix transpose() const;
    ExactMatrix operator*(const ExactMatrix& o) const;
    ExactMatrix operator+(const ExactMatrix& o) const;
    ExactMatrix operator-(const ExactMatrix& o) const;
    ExactMatrix scaled(const Scalar& s) const;

    /// Entry-wise ring conversion. Z -> Q / F_p, and Q -> Z / F_p when every
    /// entry has denominator 1 (F_p: coprime to p).
    ExactMatrix cast_to(RingDesc target) const;

    friend bool operator==(const ExactMatrix&, const ExactMatrix&) = default;

    std::string str() const;

private:
    RingDesc ring_;
    std::size_t rows_, cols_;
    std::map<std::pair<std::size_t, std::size_t>, Scalar> entries_;
};

/* --- field algorithms (Q and F_p) --- */

struct Rref {
    ExactMatrix matrix;              // reduced row echelon form
    std::vector<std::size_t> pivots; // pivot column indices, increasing
};

Rref rref(const ExactMatrix& m);
std::size_t rank(const ExactMatrix& m);
/// Basis of the null space; each vector has m.cols() entries.
std::vector<std::vector<Scalar>> kernel_basis(const ExactMatrix& m);

/// Determinant of a square matrix (field arithmetic; Z via Q, exact).
Scalar determinant(const ExactMatrix& m);

/* --- integer algorithms --- */

struct Snf {
    ExactMatrix d; // diagonal, d_1 | d_2 | ..., entries >= 0
    ExactMatrix u; // unimodular, rows x rows
    ExactMatrix v; // unimodular, cols x cols;  u * m * v == d
    std::vector<mpz_class> invariant_factors; // nonzero factors, divisibility chain
};

Snf smith_normal_form(const ExactMatrix& m);

} // namespace exact
} // namespace opcx
