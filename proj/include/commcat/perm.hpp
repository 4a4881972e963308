#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace commcat::perm {

using Index = std::uint32_t;

inline constexpr std::size_t kDefaultMaxElements = 100000;

struct GroupError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SizeBoundExceeded : GroupError {
    using GroupError::GroupError;
};

/// A bijection of {0, ..., degree-1}. Cycle notation on input and output is
/// 1-based. Products apply the left factor first: (a * b)(x) = b(a(x)).
class Permutation {
public:
    Permutation() = default;
    explicit Permutation(std::vector<std::uint32_t> images);

    static Permutation identity(std::size_t degree);
    /// Cycles are 1-based point lists, e.g. {{1, 2}, {3, 4, 5}}.
    static Permutation from_cycles(std::size_t degree, const std::vector<std::vector<std::uint32_t>>& cycles);

    std::size_t degree() const { return images_.size(); }
    std::uint32_t operator[](std::size_t point) const { return images_[point]; }
    const std::vector<std::uint32_t>& images() const { return images_; }

    bool is_identity() const;
    Permutation inverse() const;
    std::string to_string() const;

    friend bool operator==(const Permutation&, const Permutation&) = default;
    friend auto operator<=>(const Permutation& a, const Permutation& b) { return a.images_ <=> b.images_; }

private:
    std::vector<std::uint32_t> images_;
};

/// Applies `a` first, then `b`. Throws GroupError on degree mismatch.
Permutation compose(const Permutation& a, const Permutation& b);
inline Permutation operator*(const Permutation& a, const Permutation& b) { return compose(a, b); }

/// x^g = g^-1 x g.
Permutation conjugate(const Permutation& x, const Permutation& g);

struct PermutationHash {
    std::size_t operator()(const Permutation& p) const noexcept;
};

/// A finite permutation group with every element enumerated. Elements are
/// stored in lexicographic order of their image sequences, so index 0 is
/// always the identity.
class PermGroup {
public:
    PermGroup() = default;

    static PermGroup from_generators(std::size_t degree, std::vector<Permutation> generators, std::string label = {},
                                     std::size_t max_elements = kDefaultMaxElements);
    /// `elements` must already be closed under products.
    static PermGroup from_elements(std::size_t degree, std::vector<Permutation> elements,
                                   std::vector<Permutation> generators, std::string label = {});

    static PermGroup symmetric(std::size_t n, std::size_t max_elements = kDefaultMaxElements);
    /// Dihedral group of the given order 2N acting on N points.
    static PermGroup dihedral(std::size_t order, std::size_t max_elements = kDefaultMaxElements);

    std::size_t degree() const { return degree_; }
    std::size_t order() const { return elements_.size(); }
    const std::string& label() const { return label_; }
    const std::vector<Permutation>& generators() const { return generators_; }
    const std::vector<Index>& generator_indices() const { return generator_indices_; }
    const std::vector<Permutation>& elements() const { return elements_; }
    const Permutation& element(Index i) const { return elements_[i]; }

    static constexpr Index identity() { return 0; }
    std::optional<Index> find(const Permutation& p) const;
    Index index_of(const Permutation& p) const;

    Index mul(Index a, Index b) const;
    Index inv(Index a) const { return inverse_[a]; }
    Index conj(Index x, Index g) const;
    Index power(Index a, std::uint64_t e) const;
    std::size_t element_order(Index a) const;
    bool commute(Index a, Index b) const { return mul(a, b) == mul(b, a); }

    /// table[x] = index of s^-1 x s for the i-th generator s.
    const std::vector<Index>& conjugation_table(std::size_t generator) const { return conj_tables_[generator]; }

    std::size_t exponent() const;

private:
    void index_elements();

    std::size_t degree_ = 0;
    std::string label_;
    std::vector<Permutation> generators_;
    std::vector<Index> generator_indices_;
    std::vector<Permutation> elements_;
    std::unordered_map<Permutation, Index, PermutationHash> index_;
    std::vector<Index> inverse_;
    std::vector<std::vector<Index>> conj_tables_;
};

/// A subgroup of an ambient PermGroup, stored as the sorted list of ambient
/// element indices together with a small generating set.
class Subgroup {
public:
    Subgroup() = default;
    Subgroup(std::vector<Index> sorted_members, std::vector<Index> generators)
        : members_(std::move(sorted_members)), generators_(std::move(generators)) {}

    std::size_t order() const { return members_.size(); }
    const std::vector<Index>& members() const { return members_; }
    const std::vector<Index>& generators() const { return generators_; }
    bool contains(Index x) const;
    bool is_subgroup_of(const Subgroup& other) const;
    bool is_trivial() const { return members_.size() == 1; }

    friend bool operator==(const Subgroup& a, const Subgroup& b) { return a.members_ == b.members_; }
    friend auto operator<=>(const Subgroup& a, const Subgroup& b) {
        if (a.members_.size() != b.members_.size()) return a.members_.size() <=> b.members_.size();
        return a.members_ <=> b.members_;
    }

private:
    std::vector<Index> members_;
    std::vector<Index> generators_;
};

struct SubgroupHash {
    std::size_t operator()(const Subgroup& s) const noexcept;
};

Subgroup trivial_subgroup(const PermGroup& G);
Subgroup whole_group(const PermGroup& G);
Subgroup generated_subgroup(const PermGroup& G, std::span<const Index> generators);
/// Subgroup generated by H together with the extra element x.
Subgroup extend_subgroup(const PermGroup& G, const Subgroup& H, Index x);
Subgroup conjugate_subgroup(const PermGroup& G, const Subgroup& H, Index g);

/// {g in G : g s = s g for every s in S}.
Subgroup centralizer(const PermGroup& G, std::span<const Index> S);
Subgroup centralizer(const PermGroup& G, const Subgroup& S);
Subgroup normalizer(const PermGroup& G, const Subgroup& H);
/// Normalizer of H inside the subgroup K.
Subgroup normalizer_in(const PermGroup& G, const Subgroup& K, const Subgroup& H);
bool normalizes(const PermGroup& G, Index g, const Subgroup& H);
/// H ⊴ K.
bool is_normal_in(const PermGroup& G, const Subgroup& H, const Subgroup& K);
bool is_abelian(const PermGroup& G, const Subgroup& H);
bool subgroups_commute(const PermGroup& G, const Subgroup& A, const Subgroup& B);

/// Standalone copy of H; element k of the result is ambient element H.members()[k].
PermGroup as_group(const PermGroup& G, const Subgroup& H, std::string label = {});

struct ConjugacyClass {
    Index representative = 0;
    std::vector<Index> members;
};

/// Classes ordered by their least element index; the representative is the least member.
std::vector<ConjugacyClass> conjugacy_classes(const PermGroup& G);

std::uint64_t p_part(std::uint64_t n, std::uint64_t p);
bool is_prime(std::uint64_t n);

Subgroup sylow_subgroup(const PermGroup& G, std::uint32_t p);
/// All subgroups of order p, ordered by their member lists.
std::vector<Subgroup> order_p_subgroups(const PermGroup& G, std::uint32_t p);
std::vector<Subgroup> order_p_subgroups_of(const PermGroup& G, const Subgroup& H, std::uint32_t p);
/// Every subgroup of H (intended for p-groups), ordered by (order, members).
std::vector<Subgroup> all_subgroups_of(const PermGroup& G, const Subgroup& H);
/// Representatives of the G-classes of p-subgroups, taken inside one Sylow subgroup.
std::vector<Subgroup> p_subgroups_up_to_conjugacy(const PermGroup& G, std::uint32_t p);

struct ElementaryAbelian {
    bool value = false;
    std::size_t rank = 0;
};
ElementaryAbelian is_elementary_abelian(const PermGroup& G, const Subgroup& Q, std::uint32_t p);

struct Fingerprint {
    std::size_t order = 0;
    std::size_t exponent = 0;
    bool abelian = false;
    bool cyclic = false;
    /// Number of elements of order exactly p; separates D_8 (5) from Q_8 (1).
    std::size_t order_p_elements = 0;

    bool is_dihedral_8() const {
        return order == 8 && exponent == 4 && !abelian && !cyclic && order_p_elements == 5;
    }
    std::string describe() const;
    friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};
Fingerprint fingerprint(const PermGroup& G, const Subgroup& Q, std::uint32_t p);

/// Sorts subgroups into G-conjugacy classes. Each class gets a fixed
/// representative (the least conjugate) and every member records an element g
/// with rep^g = member. Orbits are explored through the generator conjugation
/// tables of G.
class SubgroupClassifier {
public:
    explicit SubgroupClassifier(const PermGroup& G) : group_(&G) {}

    struct Placement {
        std::size_t class_id = 0;
        Index conjugator = 0;
    };

    Placement classify(const Subgroup& H);
    const Subgroup& representative(std::size_t class_id) const { return reps_[class_id]; }
    std::size_t class_count() const { return reps_.size(); }
    /// All members of a class, in discovery order.
    const std::vector<Subgroup>& class_members(std::size_t class_id) const { return members_[class_id]; }
    bool conjugate(const Subgroup& A, const Subgroup& B);
    /// Some g with A^g ≤ B, if one exists (full scan of G).
    std::optional<Index> conjugator_into(const Subgroup& A, const Subgroup& B) const;

private:
    const PermGroup* group_;
    std::vector<Subgroup> reps_;
    std::vector<std::vector<Subgroup>> members_;
    std::unordered_map<Subgroup, Placement, SubgroupHash> placed_;
};

/// Sorted member list of H^g.
std::vector<Index> conjugate_members(const PermGroup& G, std::span<const Index> members, Index g);

}  // namespace commcat::perm
