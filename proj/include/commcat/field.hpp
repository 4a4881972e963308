#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace commcat::ff {

struct FieldError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Element of GF(p^d), encoded as the integer sum c_i p^i of its coefficients
/// in the polynomial basis 1, x, ..., x^(d-1).
class FieldElement {
public:
    constexpr FieldElement() = default;
    constexpr explicit FieldElement(std::uint32_t code) : code_(code) {}

    constexpr std::uint32_t code() const { return code_; }
    constexpr bool is_zero() const { return code_ == 0; }

    friend constexpr auto operator<=>(FieldElement, FieldElement) = default;

private:
    std::uint32_t code_ = 0;
};

using Vector = std::vector<FieldElement>;

/// GF(p^d) built on the least irreducible modulus of degree d.
class Field {
public:
    explicit Field(std::uint32_t p, std::uint32_t degree = 1);

    std::uint32_t characteristic() const { return p_; }
    std::uint32_t degree() const { return d_; }
    std::uint32_t order() const { return q_; }
    /// Prime-field coefficients of the modulus, constant term first. Empty when d = 1.
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }

    FieldElement zero() const { return FieldElement{0}; }
    FieldElement one() const { return FieldElement{1}; }
    FieldElement from_int(std::int64_t v) const;
    /// Primitive element used for the log tables; x when d > 1 and x is primitive.
    FieldElement generator() const { return FieldElement{generator_}; }

    FieldElement add(FieldElement a, FieldElement b) const;
    FieldElement sub(FieldElement a, FieldElement b) const;
    FieldElement neg(FieldElement a) const;
    FieldElement mul(FieldElement a, FieldElement b) const;
    FieldElement inv(FieldElement a) const;
    FieldElement div(FieldElement a, FieldElement b) const { return mul(a, inv(b)); }
    FieldElement pow(FieldElement a, std::uint64_t e) const;
    /// a^p.
    FieldElement frobenius(FieldElement a) const { return pow(a, p_); }

    std::vector<std::uint32_t> coefficients(FieldElement a) const;
    FieldElement from_coefficients(std::span<const std::uint32_t> c) const;
    bool in_prime_field(FieldElement a) const { return a.code() < p_; }
    std::string to_string(FieldElement a) const;

    bool operator==(const Field& o) const { return p_ == o.p_ && d_ == o.d_; }

private:
    FieldElement raw_mul(FieldElement a, FieldElement b) const;

    std::uint32_t p_;
    std::uint32_t d_;
    std::uint32_t q_;
    std::vector<std::uint32_t> modulus_;
    std::uint32_t generator_ = 1;
    std::vector<std::uint32_t> exp_;
    std::vector<std::uint32_t> log_;
};

/// Multiplicative order of a modulo n (gcd(a, n) = 1, n ≥ 1).
std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t n);

// ---------------------------------------------------------------------------

/// Univariate polynomial over a Field, coefficients lowest degree first.
/// The referenced Field must outlive the polynomial.
class Polynomial {
public:
    explicit Polynomial(const Field& f) : field_(&f) {}
    Polynomial(const Field& f, std::vector<FieldElement> coeffs);

    static Polynomial constant(const Field& f, FieldElement c) { return Polynomial(f, {c}); }
    static Polynomial x(const Field& f) { return Polynomial(f, {f.zero(), f.one()}); }
    /// Builds a polynomial over the prime field from integer coefficients.
    static Polynomial from_ints(const Field& f, std::initializer_list<std::int64_t> coeffs);

    const Field& field() const { return *field_; }
    const Vector& coefficients() const { return c_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    FieldElement leading() const { return c_.empty() ? FieldElement{} : c_.back(); }
    FieldElement coefficient(std::size_t i) const { return i < c_.size() ? c_[i] : FieldElement{}; }
    bool is_monic() const { return !c_.empty() && c_.back() == field_->one(); }

    Polynomial monic() const;
    Polynomial derivative() const;
    FieldElement evaluate(FieldElement v) const;
    std::string to_string() const;

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator*(FieldElement s) const;
    Polynomial operator/(const Polynomial& o) const { return divmod(o).first; }
    Polynomial operator%(const Polynomial& o) const { return divmod(o).second; }
    std::pair<Polynomial, Polynomial> divmod(const Polynomial& divisor) const;

    /// this^e mod m.
    Polynomial powmod(std::uint64_t e, const Polynomial& m) const;

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }
    /// Degree first, then coefficients from the top down (the integer encoding order).
    friend bool operator<(const Polynomial& a, const Polynomial& b);

private:
    void trim();
    const Field* field_;
    Vector c_;
};

Polynomial gcd(Polynomial a, Polynomial b);

struct Factor {
    Polynomial factor;
    int multiplicity;
};

/// Monic irreducible factorization. The product of factor^multiplicity times
/// the leading coefficient of f reproduces f. Output is sorted by the
/// polynomial encoding order. Throws FieldError on the zero polynomial.
std::vector<Factor> factor(const Polynomial& f);
bool is_irreducible(const Polynomial& f);
/// Least monic irreducible of degree d over GF(p) under the integer encoding.
Polynomial least_irreducible(const Field& prime_field, std::uint32_t d);
/// Roots in the base field, sorted by code, without multiplicity.
std::vector<FieldElement> roots(const Polynomial& f);

// ---------------------------------------------------------------------------

struct InconsistentSystem : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dense matrix over a Field (row-major).
class Matrix {
public:
    Matrix(const Field& f, std::size_t rows, std::size_t cols);
    static Matrix identity(const Field& f, std::size_t n);
    /// Matrix whose columns are the given vectors (all of length `rows`).
    static Matrix from_columns(const Field& f, std::size_t rows, const std::vector<Vector>& cols);

    const Field& field() const { return *field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    FieldElement& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    FieldElement at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
    Vector column(std::size_t c) const;

    Matrix operator*(const Matrix& o) const;
    Vector operator*(const Vector& v) const;

    /// Reduced row echelon form in place; returns pivot columns.
    std::vector<std::size_t> reduce();
    std::size_t rank() const;
    /// Basis of the column space (the image of v ↦ M v).
    std::vector<Vector> image_basis() const;
    std::vector<Vector> kernel_basis() const;
    /// Some x with M x = b; throws InconsistentSystem otherwise.
    Vector solve(const Vector& b) const;
    /// Basis of the image of M^n, n = rows (the Fitting image). Square only.
    std::vector<Vector> stable_image() const;

private:
    const Field* field_;
    std::size_t rows_;
    std::size_t cols_;
    Vector a_;
};

/// Echelon basis of span(vectors); all vectors have length `dim`.
std::vector<Vector> span_basis(const Field& f, std::size_t dim, const std::vector<Vector>& vectors);

}  // namespace commcat::ff
