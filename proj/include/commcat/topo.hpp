#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/container_hash/hash.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace commcat::topo {

using Element = std::uint32_t;
using BigInt = boost::multiprecision::cpp_int;

inline constexpr std::size_t kDefaultMaxSimplices = 1000000;

struct PosetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SimplexBoundExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Finite poset on elements 0..n-1. The strict order is stored as sorted
/// up-sets and down-sets.
class Poset {
public:
    Poset() = default;

    /// Transitive closure of the given strict relations. Throws PosetError
    /// (naming an element on the cycle) if the closure is not antisymmetric.
    static Poset from_relation(std::size_t n, const std::vector<std::pair<Element, Element>>& less,
                               std::vector<std::string> labels = {});
    /// Evaluates leq on every ordered pair and validates the partial order axioms.
    static Poset from_predicate(std::size_t n, const std::function<bool(Element, Element)>& leq,
                                std::vector<std::string> labels = {});

    std::size_t size() const { return up_.size(); }
    bool empty() const { return up_.empty(); }
    const std::string& label(Element a) const { return labels_[a]; }
    const std::vector<std::string>& labels() const { return labels_; }

    bool leq(Element a, Element b) const;
    bool less(Element a, Element b) const { return a != b && leq(a, b); }
    /// Strictly greater elements, sorted.
    const std::vector<Element>& above(Element a) const { return up_[a]; }
    const std::vector<Element>& below(Element a) const { return down_[a]; }

    /// All strict pairs (a, b) with a < b, sorted.
    std::vector<std::pair<Element, Element>> relation() const;
    /// Covering pairs of the Hasse diagram, sorted.
    std::vector<std::pair<Element, Element>> covering() const;
    std::vector<Element> minimal_elements() const;
    std::vector<Element> maximal_elements() const;

private:
    std::vector<std::vector<Element>> up_;
    std::vector<std::vector<Element>> down_;
    std::vector<std::string> labels_;
};

/// A poset with a group acting through a list of generators. action[s][x] is
/// the image of x under generator s.
class GPoset {
public:
    GPoset() = default;
    GPoset(Poset poset, std::vector<std::vector<Element>> action);

    const Poset& poset() const { return poset_; }
    const std::vector<std::vector<Element>>& action() const { return action_; }
    std::size_t size() const { return poset_.size(); }

    /// Empty string when every generator is a bijective order-automorphism,
    /// otherwise a description of the first violation.
    std::string check_action() const;

private:
    Poset poset_;
    std::vector<std::vector<Element>> action_;
};

struct OrbitPoset {
    Poset poset;
    std::vector<Element> orbit_of;
    /// Orbits ordered by their least element; members sorted.
    std::vector<std::vector<Element>> orbits;
};

/// [x] ≤ [y] iff x' ≤ y' for some representatives. Throws PosetError if the
/// induced relation is not antisymmetric.
OrbitPoset orbit_poset(const GPoset& X);

// ---------------------------------------------------------------------------

using Simplex = std::vector<Element>;

struct SimplexHash {
    std::size_t operator()(const Simplex& s) const noexcept { return boost::hash_range(s.begin(), s.end()); }
};

/// Downward-closed family of vertex sets, faces stored by dimension.
class SimplicialComplex {
public:
    SimplicialComplex() = default;
    /// Adds every face of every given simplex.
    static SimplicialComplex from_faces(std::size_t vertex_count, const std::vector<Simplex>& faces,
                                        std::size_t max_simplices = kDefaultMaxSimplices);

    std::size_t vertex_count() const { return vertex_count_; }
    /// -1 for the empty complex.
    int dimension() const { return static_cast<int>(faces_.size()) - 1; }
    const std::vector<Simplex>& faces(int d) const { return faces_[d]; }
    std::size_t face_count() const;
    std::optional<std::size_t> index_of(const Simplex& s) const;
    long long euler_characteristic() const;

private:
    void add(Simplex s);
    std::size_t vertex_count_ = 0;
    std::vector<std::vector<Simplex>> faces_;
    std::vector<std::unordered_map<Simplex, std::size_t, SimplexHash>> index_;
};

/// Chains x_0 < ... < x_n as n-simplices.
SimplicialComplex order_complex(const Poset& X, std::size_t max_simplices = kDefaultMaxSimplices);
/// Euler characteristic of the order complex, by counting chains (no simplex cap).
long long order_complex_euler(const Poset& X);
/// Flag complex of a simple graph given by adjacency lists.
SimplicialComplex clique_complex(const std::vector<std::vector<Element>>& adjacency,
                                 std::size_t max_simplices = kDefaultMaxSimplices);
/// Nonempty faces ordered by inclusion; element i corresponds to the i-th face
/// in dimension-major order.
Poset face_poset(const SimplicialComplex& K, std::vector<Simplex>* faces_out = nullptr);

// ---------------------------------------------------------------------------

/// Column-major sparse integer matrix.
struct SparseIntMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> columns;
};

/// ∂_d : C_d → C_{d-1} for d = 1..dim; result[d-1] is ∂_d.
std::vector<SparseIntMatrix> boundary_matrices(const SimplicialComplex& K);

struct DenseIntMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<BigInt> a;

    DenseIntMatrix() = default;
    DenseIntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}
    static DenseIntMatrix identity(std::size_t n);
    static DenseIntMatrix from_sparse(const SparseIntMatrix& m);
    BigInt& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    const BigInt& at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
    DenseIntMatrix operator*(const DenseIntMatrix& o) const;
    bool operator==(const DenseIntMatrix& o) const = default;
};

struct SmithForm {
    /// d_1 | d_2 | ... of length min(rows, cols), nonnegative.
    std::vector<BigInt> diagonal;
    DenseIntMatrix U;
    DenseIntMatrix V;
};

/// U * M * V = diag(diagonal), U and V unimodular.
SmithForm smith_normal_form(const DenseIntMatrix& M);
/// Nonzero invariant factors of a sparse matrix (unit pivots eliminated
/// sparsely, the rest densely). Uses checked 64-bit arithmetic and widens to
/// arbitrary precision on overflow.
std::vector<BigInt> invariant_factors(const SparseIntMatrix& M);

struct HomologyGroup {
    std::size_t betti = 0;
    /// Torsion coefficients > 1, each dividing the next.
    std::vector<BigInt> torsion;
    bool operator==(const HomologyGroup&) const = default;
};

/// Unreduced integral homology, one entry per degree 0..dim. Empty for the empty complex.
struct HomologyResult {
    std::vector<HomologyGroup> groups;
    bool empty_complex() const { return groups.empty(); }
    long long euler_characteristic() const;
    std::string describe() const;
    bool operator==(const HomologyResult&) const = default;
};

HomologyResult homology(const SimplicialComplex& K);
/// Degreewise comparison; degrees beyond a complex's dimension count as zero.
bool homology_equal(const HomologyResult& a, const HomologyResult& b);

// ---------------------------------------------------------------------------

struct QuillenCertificate {
    bool forward_order_preserving = true;
    bool backward_order_preserving = true;
    bool forward_equivariant = true;
    bool backward_equivariant = true;
    /// +1: x ≤ H(F(x)) for all x; -1: H(F(x)) ≤ x for all x; 2: both (identity); 0: neither.
    int source_direction = 0;
    int target_direction = 0;
    std::vector<std::string> witnesses;

    bool pass() const {
        return forward_order_preserving && backward_order_preserving && forward_equivariant && backward_equivariant &&
               source_direction != 0 && target_direction != 0;
    }
};

/// Checks the poset form of the homotopy-equivalence criterion for F : X → Y
/// and H : Y → X. The actions of X and Y must use the same generator list.
QuillenCertificate quillen_pair_check(const GPoset& X, const GPoset& Y, std::span<const Element> F,
                                      std::span<const Element> H);

struct IsoCheck {
    bool pass = false;
    std::string witness;
};

/// f bijective with f and f^-1 order-preserving.
IsoCheck poset_iso_check(const Poset& X, const Poset& Y, std::span<const Element> f);

/// Hasse diagram in DOT; nodes coloured by orbit when orbit_of is given.
std::string to_dot(const Poset& X, const std::string& name, const std::vector<Element>* orbit_of = nullptr);

}  // namespace commcat::topo
