#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "commcat/brauer.hpp"
#include "commcat/commuting.hpp"
#include "commcat/topo.hpp"

namespace commcat::fusion {

using brauer::BrauerPair;
using brauer::LocalStructure;
using perm::Index;
using perm::PermGroup;
using perm::Subgroup;
using topo::Element;

/// Deterministic maximal pair: the least defect group in member order and the
/// block of least index above it.
BrauerPair max_brauer_pair(LocalStructure& L, const alg::Block& b);

/// A conjugation map Q → R, recorded by the images of the canonical generators of Q.
struct Morphism {
    std::vector<Index> images;
    /// Some g inducing the map as x ↦ x^g.
    Index conjugator = 0;

    friend bool operator==(const Morphism& a, const Morphism& b) { return a.images == b.images; }
    friend bool operator<(const Morphism& a, const Morphism& b) { return a.images < b.images; }
};

class FusionSystem {
public:
    FusionSystem(LocalStructure& L, const alg::Block& b);

    const PermGroup& group() const { return *group_; }
    const BrauerPair& top() const { return top_; }
    const Subgroup& defect_group() const { return top_.Q; }
    /// Every subgroup of P, ordered by (order, members).
    const std::vector<Subgroup>& objects() const { return objects_; }
    /// The stored copy of X; its generator list fixes the image tuples of morphisms.
    const Subgroup& canonical(const Subgroup& X) const;
    /// The unique (X, e_X) ≤ (P, e_P).
    const BrauerPair& subpair(const Subgroup& X) const;

    /// Maps Q → R of the form x ↦ x^g with (Q, e_Q)^g ≤ (R, e_R), sorted, deduplicated.
    const std::vector<Morphism>& hom(const Subgroup& Q, const Subgroup& R);
    /// Image under a morphism out of Q of an arbitrary element of Q.
    Index apply(const Morphism& m, Index x) const { return group_->conj(x, m.conjugator); }
    /// The map of ψ ∘ φ out of Q (φ first), as a morphism out of Q.
    Morphism compose(const Subgroup& Q, const Morphism& phi, const Morphism& psi) const;

private:
    bool transports(const Subgroup& Q, Index g);

    LocalStructure* local_;
    const PermGroup* group_;
    BrauerPair top_;
    std::vector<Subgroup> objects_;
    std::map<std::vector<Index>, BrauerPair> subpairs_;
    std::map<std::vector<Index>, std::size_t> object_index_;
    std::map<std::pair<std::vector<Index>, std::vector<Index>>, std::vector<Morphism>> homs_;
};

struct CommutingCategory {
    /// Order-p subgroups of P, sorted.
    std::vector<Subgroup> vertices;
    /// Nonempty pairwise-commuting sets of vertices, ordered by (size, members).
    std::vector<std::vector<Element>> objects;
    std::vector<Subgroup> products;
    /// homs[i][j] = Hom(κ_i, κ_j), morphisms of Πκ_i → Πκ_j.
    std::vector<std::vector<std::vector<Morphism>>> homs;
};

/// Builds K(F). Throws brauer::TheoryViolation if composition leaves a hom set
/// or an endomorphism lacks an inverse.
CommutingCategory commuting_category(FusionSystem& FS, std::uint32_t p);

struct IsoClassPoset {
    topo::Poset poset;
    std::vector<Element> class_of;
    std::vector<std::vector<Element>> classes;
};

IsoClassPoset iso_class_poset(FusionSystem& FS, const CommutingCategory& C);

std::string describe(const PermGroup& G, const CommutingCategory& C, Element object);

struct Theorem2Result {
    std::size_t class_count = 0;
    std::size_t orbit_count = 0;
    bool forward_well_defined = true;
    bool eta_well_defined = true;
    bool mutually_inverse = true;
    topo::IsoCheck forward_iso;
    topo::IsoCheck inverse_iso;
    /// forward[class] = orbit, eta[orbit] = class.
    std::vector<Element> forward;
    std::vector<Element> eta;
    std::vector<std::string> witnesses;

    bool pass() const {
        return class_count == orbit_count && forward_well_defined && eta_well_defined && mutually_inverse &&
               forward_iso.pass && inverse_iso.pass;
    }
};

/// [K(F)] against K(b)/G through the forward map and η.
Theorem2Result theorem2_check(LocalStructure& L, const alg::Block& b, const commuting::KPoset& K);

}  // namespace commcat::fusion
