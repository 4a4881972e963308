#include "commcat/brauer.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace commcat::brauer {

Vector LocalData::coordinates(const GroupAlgebraElement& z) const {
    Vector out;
    out.reserve(class_reps.size());
    for (Index r : class_reps) out.push_back(z.coefficient(r));
    return out;
}

std::optional<std::size_t> LocalData::find_block(const GroupAlgebraElement& e) const {
    for (std::size_t i = 0; i < blocks.size(); ++i)
        if (blocks[i].idempotent == e) return i;
    return std::nullopt;
}

LocalStructure::LocalStructure(const PermGroup& G, const Field& f) : group_(&G), field_(&f), classifier_(G) {}

LocalStructure::LocalStructure(const PermGroup& G, const Field& f, std::vector<Vector> block_coords)
    : LocalStructure(G, f) {
    seeded_blocks_ = std::move(block_coords);
    blocks();
}

const std::vector<Block>& LocalStructure::blocks() { return local(perm::trivial_subgroup(*group_)).blocks; }

std::size_t LocalStructure::block_index(const Block& b) {
    const auto& all = blocks();
    for (std::size_t i = 0; i < all.size(); ++i)
        if (all[i].idempotent == b.idempotent) return i;
    throw std::invalid_argument("not a block of " + group_->label());
}

namespace {

GroupAlgebraElement to_ambient(const Field& f, const GroupAlgebraElement& local, const std::vector<Index>& ambient) {
    std::vector<GroupAlgebraElement::Term> terms;
    terms.reserve(local.terms().size());
    for (auto [k, c] : local.terms()) terms.emplace_back(ambient[k], c);
    return GroupAlgebraElement(f, std::move(terms));
}

}  // namespace

const LocalData& LocalStructure::local(const Subgroup& Q) {
    std::lock_guard lock(mutex_);
    if (auto it = by_subgroup_.find(Q); it != by_subgroup_.end()) return *it->second;
    const PermGroup& G = *group_;
    const auto place = classifier_.classify(Q);
    if (place.class_id >= by_class_.size()) by_class_.resize(place.class_id + 1);
    auto& rep_data = by_class_[place.class_id];
    if (!rep_data) {
        const Subgroup& R = classifier_.representative(place.class_id);
        auto data = std::make_unique<LocalData>();
        data->centralizer = perm::centralizer(G, R);
        const std::string label = R.is_trivial() ? G.label() : "C_G(" + describe(G, R) + ")";
        PermGroup H = perm::as_group(G, data->centralizer, label);
        data->algebra = std::make_shared<alg::CentralAlgebra>(H, *field_);
        const auto& members = data->centralizer.members();
        for (const auto& cls : data->algebra->classes()) data->class_reps.push_back(members[cls.representative]);
        auto computed = (R.is_trivial() && seeded_blocks_)
                            ? alg::blocks_from_coordinates(H, *data->algebra, *seeded_blocks_)
                            : alg::blocks_from_algebra(H, *data->algebra);
        for (auto& blk : computed) {
            blk.idempotent = to_ambient(*field_, blk.idempotent, members);
            data->blocks.push_back(std::move(blk));
        }
        rep_data = std::move(data);
        // Seed the subgroup cache with the representative itself.
        auto copy = std::make_unique<LocalData>(*rep_data);
        by_subgroup_.emplace(R, std::move(copy));
    }
    if (auto it = by_subgroup_.find(Q); it != by_subgroup_.end()) return *it->second;

    const Index g = place.conjugator;  // rep^g = Q
    auto data = std::make_unique<LocalData>();
    data->centralizer = perm::conjugate_subgroup(G, rep_data->centralizer, g);
    data->algebra = rep_data->algebra;
    for (Index r : rep_data->class_reps) data->class_reps.push_back(G.conj(r, g));
    for (const auto& blk : rep_data->blocks) {
        Block moved = blk;
        moved.idempotent = blk.idempotent.conjugate(G, g);
        data->blocks.push_back(std::move(moved));
    }
    auto [it, inserted] = by_subgroup_.emplace(Q, std::move(data));
    return *it->second;
}

const std::vector<Subgroup>& LocalStructure::p_subgroup_classes() {
    std::lock_guard lock(mutex_);
    if (!p_classes_) p_classes_ = perm::p_subgroups_up_to_conjugacy(*group_, prime());
    return *p_classes_;
}

// ---------------------------------------------------------------------------

std::string describe(const PermGroup& G, const Subgroup& Q) {
    if (Q.is_trivial()) return "1";
    std::string out = "<";
    for (std::size_t i = 0; i < Q.generators().size(); ++i)
        out += (i ? ", " : "") + G.element(Q.generators()[i]).to_string();
    return out + ">";
}

std::string describe(const PermGroup& G, const BrauerPair& pair) {
    return "(" + describe(G, pair.Q) + ", e" + std::to_string(pair.block) + ")";
}

bool is_fixed_by(const PermGroup& G, const Subgroup& Q, const GroupAlgebraElement& a) {
    for (Index q : Q.generators())
        if (!(a.conjugate(G, q) == a)) return false;
    return true;
}

GroupAlgebraElement brauer_hom(const PermGroup& G, const Subgroup& Q, const GroupAlgebraElement& a) {
    if (!is_fixed_by(G, Q, a)) throw NotFixedError("element is not fixed by " + describe(G, Q));
    return a.restrict_to(perm::centralizer(G, Q).members());
}

GroupAlgebraElement brauer_hom(LocalStructure& L, const Subgroup& Q, const GroupAlgebraElement& a) {
    if (!is_fixed_by(L.group(), Q, a)) throw NotFixedError("element is not fixed by " + describe(L.group(), Q));
    return a.restrict_to(L.local(Q).centralizer.members());
}

Vector brauer_coordinates(LocalStructure& L, const Subgroup& Q, const Block& b) {
    // b is central in kG, hence fixed by Q; its values on C_G(Q) are read at class reps.
    return L.local(Q).coordinates(b.idempotent);
}

bool brauer_vanishes(LocalStructure& L, const Subgroup& Q, const Block& b) {
    const auto& members = L.local(Q).centralizer.members();
    for (auto [g, c] : b.idempotent.terms())
        if (std::binary_search(members.begin(), members.end(), g)) return false;
    return true;
}

std::vector<BrauerPair> brauer_pairs_for(LocalStructure& L, const Block& b, const Subgroup& Q) {
    const LocalData& D = L.local(Q);
    const auto& A = *D.algebra;
    const Vector br = brauer_coordinates(L, Q, b);
    std::vector<BrauerPair> out;
    if (A.is_zero(br)) return out;
    Vector sum = A.zero();
    for (std::size_t i = 0; i < D.blocks.size(); ++i) {
        const Vector prod = A.multiply(br, D.blocks[i].class_coords);
        if (A.is_zero(prod)) continue;
        if (prod != D.blocks[i].class_coords)
            throw TheoryViolation("Br_Q(b) e is neither 0 nor e at Q = " + describe(L.group(), Q));
        sum = A.add(sum, prod);
        out.push_back(BrauerPair{Q, i, D.blocks[i].idempotent});
    }
    if (sum != br) throw TheoryViolation("blocks under Br_Q(b) do not sum to Br_Q(b) at Q = " + describe(L.group(), Q));
    return out;
}

bool normal_containment(LocalStructure& L, const BrauerPair& lo, const BrauerPair& hi) {
    const PermGroup& G = L.group();
    if (!perm::is_normal_in(G, lo.Q, hi.Q)) return false;
    if (!is_fixed_by(G, hi.Q, lo.e)) return false;
    const LocalData& D = L.local(hi.Q);
    const Vector br = D.coordinates(lo.e.restrict_to(D.centralizer.members()));
    const Vector& f = D.blocks[hi.block].class_coords;
    return D.algebra->multiply(br, f) == f;
}

BrauerPair conjugate_pair(LocalStructure& L, const BrauerPair& pair, Index g) {
    const PermGroup& G = L.group();
    BrauerPair out;
    out.Q = perm::conjugate_subgroup(G, pair.Q, g);
    out.e = pair.e.conjugate(G, g);
    auto idx = L.local(out.Q).find_block(out.e);
    if (!idx) throw TheoryViolation("conjugate of a block idempotent is not a block of the conjugate centralizer");
    out.block = *idx;
    return out;
}

// ---------------------------------------------------------------------------

BrauerPairPoset containment_poset(LocalStructure& L, const Block& b, std::vector<Subgroup> family, bool with_action) {
    const PermGroup& G = L.group();
    std::sort(family.begin(), family.end());
    family.erase(std::unique(family.begin(), family.end()), family.end());

    BrauerPairPoset out;
    std::unordered_map<Subgroup, std::vector<topo::Element>, perm::SubgroupHash> by_subgroup;
    for (const auto& Q : family)
        for (auto& pair : brauer_pairs_for(L, b, Q)) {
            by_subgroup[pair.Q].push_back(static_cast<topo::Element>(out.pairs.size()));
            out.pairs.push_back(std::move(pair));
        }
    const auto n = static_cast<topo::Element>(out.pairs.size());

    for (topo::Element i = 0; i < n; ++i)
        for (topo::Element j = 0; j < n; ++j) {
            const auto& lo = out.pairs[i];
            const auto& hi = out.pairs[j];
            if (lo.Q.order() >= hi.Q.order() || !lo.Q.is_subgroup_of(hi.Q)) continue;
            if (normal_containment(L, lo, hi)) out.normal_edges.emplace_back(i, j);
        }

    std::vector<std::string> labels;
    for (const auto& pair : out.pairs) labels.push_back(describe(G, pair));
    topo::Poset order = topo::Poset::from_relation(n, out.normal_edges, std::move(labels));

    // Exactly one subpair of each pair at every smaller member of the family.
    for (topo::Element j = 0; j < n; ++j) {
        const auto& hi = out.pairs[j];
        for (const auto& Q : family) {
            if (!Q.is_subgroup_of(hi.Q)) continue;
            std::size_t count = 0;
            if (auto it = by_subgroup.find(Q); it != by_subgroup.end())
                for (topo::Element i : it->second)
                    if (order.leq(i, j)) ++count;
            if (count != 1)
                throw TheoryViolation("pair " + describe(G, hi) + " has " + std::to_string(count) +
                                      " subpairs at " + describe(G, Q));
        }
    }

    std::vector<std::vector<topo::Element>> action;
    if (with_action) {
        for (Index s : G.generator_indices()) {
            std::vector<topo::Element> image(n);
            for (topo::Element i = 0; i < n; ++i) {
                const auto& pair = out.pairs[i];
                const Subgroup Qs = perm::conjugate_subgroup(G, pair.Q, s);
                const GroupAlgebraElement es = pair.e.conjugate(G, s);
                auto it = by_subgroup.find(Qs);
                if (it == by_subgroup.end())
                    throw std::invalid_argument("family is not closed under conjugation at " + describe(G, pair.Q));
                bool found = false;
                for (topo::Element k : it->second)
                    if (out.pairs[k].e == es) {
                        image[i] = k;
                        found = true;
                        break;
                    }
                if (!found) throw TheoryViolation("conjugate of " + describe(G, pair) + " is not a Brauer pair");
            }
            action.push_back(std::move(image));
        }
    }
    out.poset = topo::GPoset(std::move(order), std::move(action));
    if (auto msg = out.poset.check_action(); !msg.empty()) throw TheoryViolation("conjugation action: " + msg);
    return out;
}

DefectData defect_groups(LocalStructure& L, const Block& b) {
    const PermGroup& G = L.group();
    DefectData out;
    out.block = L.block_index(b);
    for (const auto& Q : L.p_subgroup_classes())
        if (!brauer_vanishes(L, Q, b)) out.nonvanishing.push_back(Q);

    auto& classifier = L.classifier();
    std::vector<Subgroup> maximal;
    for (const auto& Q : out.nonvanishing) {
        bool below = false;
        for (const auto& R : out.nonvanishing)
            if (R.order() > Q.order() && classifier.conjugator_into(Q, R)) {
                below = true;
                break;
            }
        if (!below) maximal.push_back(Q);
    }
    if (maximal.size() != 1) {
        std::string msg = "maximal nonvanishing p-subgroups form " + std::to_string(maximal.size()) + " classes:";
        for (const auto& M : maximal) msg += " " + describe(G, M);
        throw TheoryViolation(msg);
    }
    const auto place = classifier.classify(maximal.front());
    out.defect_group = classifier.representative(place.class_id);
    out.class_size = classifier.class_members(place.class_id).size();
    out.fingerprint = perm::fingerprint(G, out.defect_group, L.prime());

    // Br_Q(b) ≠ 0 exactly for Q conjugate into a defect group.
    for (const auto& Q : L.p_subgroup_classes()) {
        const bool into = classifier.conjugator_into(Q, out.defect_group).has_value();
        const bool nonzero = std::find(out.nonvanishing.begin(), out.nonvanishing.end(), Q) != out.nonvanishing.end();
        if (into != nonzero)
            throw TheoryViolation("Brauer image at " + describe(G, Q) + (nonzero ? " is nonzero" : " vanishes") +
                                  " but the subgroup is" + (into ? "" : " not") + " conjugate into a defect group");
    }
    return out;
}

PrincipalType is_principal_type(LocalStructure& L, const Block& b) {
    PrincipalType out;
    for (const auto& Q : L.p_subgroup_classes()) {
        ++out.checked;
        const auto pairs = brauer_pairs_for(L, b, Q);
        if (pairs.size() > 1) {
            out.value = false;
            out.witness = Q;
            out.blocks_at_witness = pairs.size();
            return out;
        }
    }
    return out;
}

namespace {

// Unique block e of C_G(X) with (X, e) ⊴ (Y, f).
BrauerPair step_down(LocalStructure& L, const Subgroup& X, const BrauerPair& hi) {
    const LocalData& D = L.local(X);
    std::vector<BrauerPair> found;
    for (std::size_t i = 0; i < D.blocks.size(); ++i) {
        BrauerPair cand{X, i, D.blocks[i].idempotent};
        if (normal_containment(L, cand, hi)) found.push_back(std::move(cand));
    }
    if (found.size() != 1)
        throw TheoryViolation(std::to_string(found.size()) + " blocks at " + describe(L.group(), X) +
                              " are normally contained in " + describe(L.group(), hi));
    return found.front();
}

BrauerPair descend(LocalStructure& L, const BrauerPair& top, const std::vector<Subgroup>& chain) {
    BrauerPair current = top;
    for (auto it = chain.rbegin() + 1; it != chain.rend(); ++it) current = step_down(L, *it, current);
    return current;
}

}  // namespace

BrauerPair unique_subpair(LocalStructure& L, const BrauerPair& top, const Subgroup& Q) {
    const PermGroup& G = L.group();
    if (!Q.is_subgroup_of(top.Q)) throw std::invalid_argument(describe(G, Q) + " is not inside " + describe(G, top.Q));
    if (Q == top.Q) return top;

    std::vector<Subgroup> normalizer_chain{Q};
    while (!(normalizer_chain.back() == top.Q)) {
        Subgroup next = perm::normalizer_in(G, top.Q, normalizer_chain.back());
        if (next == normalizer_chain.back()) throw TheoryViolation("normalizer chain stalls below the top subgroup");
        normalizer_chain.push_back(std::move(next));
    }
    // One element at a time: X < <X, y> with y the least element normalizing X.
    std::vector<Subgroup> slow_chain{Q};
    while (!(slow_chain.back() == top.Q)) {
        const Subgroup& X = slow_chain.back();
        std::optional<Index> y;
        for (Index m : top.Q.members())
            if (!X.contains(m) && perm::normalizes(G, m, X)) {
                y = m;
                break;
            }
        if (!y) throw TheoryViolation("no element of the top subgroup normalizes " + describe(G, X));
        slow_chain.push_back(perm::extend_subgroup(G, X, *y));
    }

    BrauerPair a = descend(L, top, normalizer_chain);
    BrauerPair b = descend(L, top, slow_chain);
    if (!(a == b)) throw TheoryViolation("subpair at " + describe(G, Q) + " depends on the chain");
    return a;
}

}  // namespace commcat::brauer
