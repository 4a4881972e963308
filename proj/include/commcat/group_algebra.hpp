#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "commcat/field.hpp"
#include "commcat/perm.hpp"

namespace commcat::alg {

using ff::Field;
using ff::FieldElement;
using ff::Vector;
using perm::Index;
using perm::PermGroup;

inline constexpr std::uint64_t kDefaultOracleBound = 1u << 20;

struct OracleBoundExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Sparse element of kG. Support keys are element indices of a fixed ambient
/// group; subgroup algebras kH live inside the same indexing.
class GroupAlgebraElement {
public:
    using Term = std::pair<Index, FieldElement>;

    GroupAlgebraElement() = default;
    /// Terms in any order; zero coefficients are dropped, repeated keys summed.
    GroupAlgebraElement(const Field& f, std::vector<Term> terms);

    static GroupAlgebraElement unit(const Field& f) { return GroupAlgebraElement(f, {{PermGroup::identity(), f.one()}}); }

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t support_size() const { return terms_.size(); }
    FieldElement coefficient(Index g) const;

    GroupAlgebraElement add(const Field& f, const GroupAlgebraElement& o) const;
    GroupAlgebraElement scale(const Field& f, FieldElement s) const;
    GroupAlgebraElement multiply(const Field& f, const PermGroup& G, const GroupAlgebraElement& o) const;
    /// g^-1 a g, applied to every support element.
    GroupAlgebraElement conjugate(const PermGroup& G, Index g) const;
    /// Same, using a precomputed conjugation table of G.
    GroupAlgebraElement conjugate_by_table(const std::vector<Index>& table) const;
    /// Keep only the support inside `members` (a sorted index list).
    GroupAlgebraElement restrict_to(const std::vector<Index>& members) const;

    friend bool operator==(const GroupAlgebraElement& a, const GroupAlgebraElement& b) { return a.terms_ == b.terms_; }

private:
    std::vector<Term> terms_;
};

/// Sum of coefficients.
FieldElement augmentation(const Field& f, const GroupAlgebraElement& a);

/// Z(kG) in the class-sum basis. Structure constants a[i][j][k] count pairs
/// (x, y) in C_i x C_j with xy = z_k for the representative z_k of C_k, mod p.
class CentralAlgebra {
public:
    CentralAlgebra(const PermGroup& G, const Field& f);
    /// Raw construction from structure constants indexed [i][j][k] (flattened) and the
    /// index of the identity class; classes carry class sizes only.
    CentralAlgebra(const Field& f, std::size_t dim, std::vector<FieldElement> constants, std::size_t identity_class,
                   std::vector<perm::ConjugacyClass> classes = {});

    const Field& field() const { return *field_; }
    std::size_t dimension() const { return dim_; }
    const std::vector<perm::ConjugacyClass>& classes() const { return classes_; }
    std::size_t identity_class() const { return identity_class_; }
    FieldElement constant(std::size_t i, std::size_t j, std::size_t k) const { return c_[(i * dim_ + j) * dim_ + k]; }
    const std::vector<FieldElement>& constants() const { return c_; }

    Vector zero() const { return Vector(dim_, field_->zero()); }
    Vector one() const;
    Vector basis(std::size_t i) const;
    Vector add(const Vector& a, const Vector& b) const;
    Vector sub(const Vector& a, const Vector& b) const;
    Vector scale(const Vector& a, FieldElement s) const;
    Vector multiply(const Vector& a, const Vector& b) const;
    Vector power(const Vector& a, std::uint64_t e) const;
    bool is_zero(const Vector& a) const;
    /// Matrix of v ↦ v^q, q = |field| (linear over the field in characteristic p).
    ff::Matrix frobenius_matrix() const;

    /// Expands class coordinates to a group algebra element in ambient indices;
    /// `ambient[k]` maps local element k to its ambient index.
    GroupAlgebraElement expand(const Vector& coords, const std::vector<Index>& ambient) const;
    GroupAlgebraElement expand(const Vector& coords) const;

private:
    const Field* field_;
    std::size_t dim_ = 0;
    std::vector<perm::ConjugacyClass> classes_;
    std::size_t identity_class_ = 0;
    std::vector<FieldElement> c_;
};

/// Least-degree monic m with m(a) = 0, computed inside the ideal with unit `unit`
/// (pass A.one() for the whole algebra).
ff::Polynomial min_poly(const CentralAlgebra& A, const Vector& a, const Vector& unit);
ff::Polynomial min_poly(const CentralAlgebra& A, const Vector& a);

/// Basis of the stable image of v ↦ v^q.
std::vector<Vector> semisimple_part(const CentralAlgebra& A);
/// All primitive idempotents, sorted by coordinate codes.
std::vector<Vector> primitive_idempotents(const CentralAlgebra& A);
/// Exhaustive oracle over all |field|^dim elements.
std::vector<Vector> brute_force_central_idempotents(const CentralAlgebra& A,
                                                    std::uint64_t bound = kDefaultOracleBound);

struct Block {
    std::string owner;
    Vector class_coords;
    GroupAlgebraElement idempotent;
    FieldElement augmentation;
    bool principal = false;
};

/// Blocks of kG, principal block first, the rest by coordinate codes.
std::vector<Block> blocks(const PermGroup& G, const Field& f);
std::vector<Block> blocks_from_algebra(const PermGroup& G, const CentralAlgebra& A);
/// Blocks from previously computed coordinates. Throws std::invalid_argument
/// unless they are nonzero orthogonal idempotents summing to 1, as many as
/// dim ker(Frobenius - 1), which forces them to be the primitive ones.
std::vector<Block> blocks_from_coordinates(const PermGroup& G, const CentralAlgebra& A, std::vector<Vector> coords);

/// Field degree d making GF(p^d) contain the e-th roots of unity, e the p'-part of exp(G).
std::uint32_t auto_split_degree(const PermGroup& G, std::uint32_t p);

}  // namespace commcat::alg
