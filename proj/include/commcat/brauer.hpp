#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "commcat/group_algebra.hpp"
#include "commcat/perm.hpp"
#include "commcat/topo.hpp"

namespace commcat::brauer {

using alg::Block;
using alg::GroupAlgebraElement;
using ff::Field;
using ff::Vector;
using perm::Index;
using perm::PermGroup;
using perm::Subgroup;

struct NotFixedError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Raised when a property the theory guarantees fails on a computed instance.
struct TheoryViolation : std::logic_error {
    using std::logic_error::logic_error;
};

/// Centralizer C_G(Q), its centre in class coordinates and its blocks.
struct LocalData {
    Subgroup centralizer;
    std::shared_ptr<const alg::CentralAlgebra> algebra;
    /// Ambient index of one member of each class of C_G(Q), in algebra order.
    std::vector<Index> class_reps;
    /// Blocks of kC_G(Q), principal first; idempotents in ambient indices.
    std::vector<Block> blocks;

    /// Class coordinates of an element known to be central in kC_G(Q).
    Vector coordinates(const GroupAlgebraElement& z) const;
    std::optional<std::size_t> find_block(const GroupAlgebraElement& e) const;
};

/// Per-group cache of centralizer algebras. Data is computed once per
/// conjugacy class of subgroups and transported to conjugates.
class LocalStructure {
public:
    LocalStructure(const PermGroup& G, const Field& f);
    /// Uses known block coordinates of Z(kG) instead of recomputing them; they
    /// are validated as orthogonal idempotents summing to 1.
    LocalStructure(const PermGroup& G, const Field& f, std::vector<Vector> block_coords);
    LocalStructure(const LocalStructure&) = delete;
    LocalStructure& operator=(const LocalStructure&) = delete;

    const PermGroup& group() const { return *group_; }
    const Field& field() const { return *field_; }
    std::uint32_t prime() const { return field_->characteristic(); }

    /// Blocks of kG, principal first.
    const std::vector<Block>& blocks();
    std::size_t block_index(const Block& b);
    const LocalData& local(const Subgroup& Q);
    /// Representatives of the G-classes of p-subgroups, inside one Sylow subgroup.
    const std::vector<Subgroup>& p_subgroup_classes();
    perm::SubgroupClassifier& classifier() { return classifier_; }

private:
    const PermGroup* group_;
    const Field* field_;
    std::recursive_mutex mutex_;
    perm::SubgroupClassifier classifier_;
    std::vector<std::unique_ptr<LocalData>> by_class_;
    std::unordered_map<Subgroup, std::unique_ptr<LocalData>, perm::SubgroupHash> by_subgroup_;
    std::optional<std::vector<Subgroup>> p_classes_;
    std::optional<std::vector<Vector>> seeded_blocks_;
};

bool is_fixed_by(const PermGroup& G, const Subgroup& Q, const GroupAlgebraElement& a);
/// Truncation of a Q-fixed element to C_G(Q). Throws NotFixedError otherwise.
GroupAlgebraElement brauer_hom(const PermGroup& G, const Subgroup& Q, const GroupAlgebraElement& a);
GroupAlgebraElement brauer_hom(LocalStructure& L, const Subgroup& Q, const GroupAlgebraElement& a);
/// Class coordinates of Br_Q(b) in Z(kC_G(Q)).
Vector brauer_coordinates(LocalStructure& L, const Subgroup& Q, const Block& b);
bool brauer_vanishes(LocalStructure& L, const Subgroup& Q, const Block& b);

struct BrauerPair {
    Subgroup Q;
    /// Index into L.local(Q).blocks.
    std::size_t block = 0;
    GroupAlgebraElement e;

    friend bool operator==(const BrauerPair& a, const BrauerPair& b) { return a.Q == b.Q && a.e == b.e; }
};

std::string describe(const PermGroup& G, const BrauerPair& pair);
std::string describe(const PermGroup& G, const Subgroup& Q);

/// Blocks e of kC_G(Q) with Br_Q(b) e = e. Empty iff Br_Q(b) = 0.
std::vector<BrauerPair> brauer_pairs_for(LocalStructure& L, const Block& b, const Subgroup& Q);
/// Q ⊴ R, e is R-stable, and Br_R(e) f = f.
bool normal_containment(LocalStructure& L, const BrauerPair& lo, const BrauerPair& hi);
/// (Q^g, e^g), with the block index looked up in L.local(Q^g).
BrauerPair conjugate_pair(LocalStructure& L, const BrauerPair& pair, Index g);

struct BrauerPairPoset {
    std::vector<BrauerPair> pairs;
    /// Strict one-step normal containments (i, j).
    std::vector<std::pair<topo::Element, topo::Element>> normal_edges;
    /// Order plus the action of the generators of G (empty when not requested).
    topo::GPoset poset;
};

/// Pairs over a subgroup-closed family ordered by the closure of normal
/// containment. Asserts uniqueness of subpairs; with_action additionally
/// requires the family to be closed under conjugation.
BrauerPairPoset containment_poset(LocalStructure& L, const Block& b, std::vector<Subgroup> family,
                                  bool with_action = true);

struct DefectData {
    std::size_t block = 0;
    Subgroup defect_group;
    std::size_t class_size = 0;
    perm::Fingerprint fingerprint;
    /// Class representatives Q with Br_Q(b) ≠ 0.
    std::vector<Subgroup> nonvanishing;
    std::size_t order() const { return defect_group.order(); }
};

/// Maximal p-subgroups with nonvanishing Brauer image. Throws TheoryViolation
/// when they do not form one class or when Br_Q(b) ≠ 0 fails to match
/// containment in a defect group.
DefectData defect_groups(LocalStructure& L, const Block& b);

struct PrincipalType {
    bool value = true;
    std::optional<Subgroup> witness;
    std::size_t blocks_at_witness = 0;
    std::size_t checked = 0;
};

PrincipalType is_principal_type(LocalStructure& L, const Block& b);

/// The unique (Q, e) ≤ top, found by descending Q ⊴ N_R(Q) ⊴ ... ⊴ R. A second
/// chain of one-element extensions must give the same block.
BrauerPair unique_subpair(LocalStructure& L, const BrauerPair& top, const Subgroup& Q);

}  // namespace commcat::brauer
