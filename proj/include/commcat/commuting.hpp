#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "commcat/brauer.hpp"
#include "commcat/topo.hpp"

namespace commcat::commuting {

using brauer::BrauerPair;
using brauer::LocalStructure;
using perm::Index;
using perm::PermGroup;
using perm::Subgroup;
using topo::Element;

inline constexpr std::size_t kDefaultMaxPosetElements = 100000;

struct ElementBoundExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Subgroup generated by pairwise commuting subgroups. Throws
/// std::invalid_argument if two members fail to commute.
Subgroup pi(const PermGroup& G, std::span<const Subgroup> kappa);
/// Order-p subgroups of an abelian subgroup Q.
std::vector<Subgroup> c_of(const PermGroup& G, const Subgroup& Q, std::uint32_t p);

struct CommutingGraph {
    std::vector<Subgroup> vertices;
    std::vector<std::vector<Element>> adjacency;

    std::size_t edge_count() const;
    std::optional<Element> vertex_of(const Subgroup& Q) const;
    bool adjacent(Element u, Element v) const;
};

CommutingGraph commuting_graph(const PermGroup& G, std::uint32_t p);
CommutingGraph commuting_graph_on(const PermGroup& G, std::vector<Subgroup> vertices);

/// b-Brauer pairs with nontrivial elementary abelian first component.
struct APoset {
    std::vector<BrauerPair> elements;
    topo::GPoset poset;
    std::unordered_map<Subgroup, std::vector<Element>, perm::SubgroupHash> by_subgroup;

    std::optional<Element> find(const Subgroup& Q, const alg::GroupAlgebraElement& e) const;
};

struct KElement {
    /// Sorted vertex ids of the commuting graph.
    std::vector<Element> kappa;
    Subgroup product;
    std::size_t block = 0;
    alg::GroupAlgebraElement e;
};

struct KPoset {
    /// Commuting graph on the order-p subgroups with nonvanishing Brauer image.
    CommutingGraph graph;
    std::vector<KElement> elements;
    topo::GPoset poset;
    std::map<std::vector<Element>, std::vector<Element>> by_kappa;

    std::optional<Element> find(const std::vector<Element>& kappa, const alg::GroupAlgebraElement& e) const;
};

APoset build_A(LocalStructure& L, const alg::Block& b);
/// Elements ordered by (|κ|, κ, block). The A poset supplies the Brauer-pair order.
KPoset build_K(LocalStructure& L, const alg::Block& b, const APoset& A,
               std::size_t max_elements = kDefaultMaxPosetElements);

/// Φ(Q, e) = (c(Q), e) and Ψ(κ, e) = (Πκ, e), as index maps.
Element phi(const PermGroup& G, std::uint32_t p, const APoset& A, const KPoset& K, Element x);
Element psi(const APoset& A, const KPoset& K, Element y);
std::vector<Element> phi_map(const PermGroup& G, std::uint32_t p, const APoset& A, const KPoset& K);
std::vector<Element> psi_map(const APoset& A, const KPoset& K);

struct Theorem1Result {
    std::size_t a_size = 0;
    std::size_t k_size = 0;
    bool psi_phi_identity = true;
    /// Number of K elements y with y ≤ ΦΨ(y).
    std::size_t below_round_trip = 0;
    topo::QuillenCertificate certificate;
    std::vector<std::string> witnesses;

    bool pass() const { return psi_phi_identity && below_round_trip == k_size && certificate.pass(); }
};

Theorem1Result theorem1_check(const PermGroup& G, std::uint32_t p, const APoset& A, const KPoset& K);

struct HomologyAgreement {
    long long euler_a = 0;
    long long euler_k = 0;
    bool computed = false;
    std::string skipped_reason;
    topo::HomologyResult homology_a;
    topo::HomologyResult homology_k;

    bool euler_equal() const { return euler_a == euler_k; }
    bool homology_equal() const { return computed && topo::homology_equal(homology_a, homology_k); }
};

/// Compares the order complexes of two posets. Homology is skipped when either
/// complex has more than max_simplices simplices; Euler characteristics are
/// always computed, by counting chains.
HomologyAgreement homology_agreement(const topo::Poset& A, const topo::Poset& K,
                                     std::size_t max_simplices = topo::kDefaultMaxSimplices);

struct Obstruction {
    /// K indices of minimal elements, pairwise bounded above, not jointly bounded.
    std::vector<Element> clique;
    Subgroup generated;
    bool brauer_zero = false;
};

/// Looks for a clique of the "pairwise bounded" graph on minimal elements of K
/// that no element of K covers.
std::optional<Obstruction> clique_witness(LocalStructure& L, const alg::Block& b, const KPoset& K);

/// For a principal block: κ ↦ (κ, e) against the face poset of the clique
/// complex of the full commuting graph.
topo::IsoCheck principal_clique_check(const PermGroup& G, std::uint32_t p, const KPoset& K);

std::string describe(const PermGroup& G, const KPoset& K, Element y);

using topo::orbit_poset;

}  // namespace commcat::commuting
