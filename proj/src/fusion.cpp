#include "commcat/fusion.hpp"

#include <algorithm>
#include <numeric>

namespace commcat::fusion {

using brauer::describe;
using brauer::TheoryViolation;

BrauerPair max_brauer_pair(LocalStructure& L, const alg::Block& b) {
    const auto defect = brauer::defect_groups(L, b);
    auto pairs = brauer::brauer_pairs_for(L, b, defect.defect_group);
    if (pairs.empty()) throw TheoryViolation("no Brauer pair at the defect group");
    return pairs.front();
}

namespace {

bool maps_into(const PermGroup& G, const Subgroup& Q, const Subgroup& R, Index g) {
    for (Index q : Q.generators())
        if (!R.contains(G.conj(q, g))) return false;
    return true;
}

// Class coordinates of e^g in Z(kC_G(Q^g)), read at the class representatives.
ff::Vector conjugate_coordinates(LocalStructure& L, const alg::GroupAlgebraElement& e, const Subgroup& Qg, Index g) {
    const PermGroup& G = L.group();
    const auto& D = L.local(Qg);
    const Index back = G.inv(g);
    ff::Vector out;
    out.reserve(D.class_reps.size());
    for (Index r : D.class_reps) out.push_back(e.coefficient(G.conj(r, back)));
    return out;
}

}  // namespace

FusionSystem::FusionSystem(LocalStructure& L, const alg::Block& b)
    : local_(&L), group_(&L.group()), top_(max_brauer_pair(L, b)) {
    const PermGroup& G = *group_;
    objects_ = perm::all_subgroups_of(G, top_.Q);
    for (std::size_t i = 0; i < objects_.size(); ++i) {
        object_index_.emplace(objects_[i].members(), i);
        subpairs_.emplace(objects_[i].members(), brauer::unique_subpair(L, top_, objects_[i]));
    }
    for (const auto& X : objects_)
        for (const auto& Y : objects_)
            if (X.order() < Y.order() && perm::is_normal_in(G, X, Y) &&
                !brauer::normal_containment(L, subpair(X), subpair(Y)))
                throw TheoryViolation("subpairs at " + describe(G, X) + " and " + describe(G, Y) +
                                      " are not normally contained");
}

const Subgroup& FusionSystem::canonical(const Subgroup& X) const {
    auto it = object_index_.find(X.members());
    if (it == object_index_.end()) throw std::invalid_argument(describe(*group_, X) + " is not a subgroup of the defect group");
    return objects_[it->second];
}

const BrauerPair& FusionSystem::subpair(const Subgroup& X) const {
    auto it = subpairs_.find(X.members());
    if (it == subpairs_.end()) throw std::invalid_argument(describe(*group_, X) + " is not a subgroup of the defect group");
    return it->second;
}

bool FusionSystem::transports(const Subgroup& Q, Index g) {
    const Subgroup Qg = perm::conjugate_subgroup(*group_, Q, g);
    const auto& target = subpair(Qg);
    const auto& coords = local_->local(Qg).blocks[target.block].class_coords;
    return conjugate_coordinates(*local_, subpair(Q).e, Qg, g) == coords;
}

const std::vector<Morphism>& FusionSystem::hom(const Subgroup& Q, const Subgroup& R) {
    auto key = std::make_pair(Q.members(), R.members());
    if (auto it = homs_.find(key); it != homs_.end()) return it->second;
    const PermGroup& G = *group_;
    const Subgroup& source = canonical(Q);
    canonical(R);
    std::vector<Morphism> out;
    for (Index g = 0; g < G.order(); ++g) {
        if (!maps_into(G, Q, R, g)) continue;
        if (!transports(Q, g)) continue;
        Morphism m;
        m.conjugator = g;
        for (Index q : source.generators()) m.images.push_back(G.conj(q, g));
        out.push_back(std::move(m));
    }
    std::stable_sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return homs_.emplace(std::move(key), std::move(out)).first->second;
}

Morphism FusionSystem::compose(const Subgroup& Q, const Morphism& phi, const Morphism& psi) const {
    Morphism out;
    out.conjugator = group_->mul(phi.conjugator, psi.conjugator);
    for (Index q : canonical(Q).generators()) out.images.push_back(group_->conj(q, out.conjugator));
    return out;
}

// ---------------------------------------------------------------------------

std::string describe(const PermGroup& G, const CommutingCategory& C, Element object) {
    std::string out = "{";
    const auto& kappa = C.objects[object];
    for (std::size_t i = 0; i < kappa.size(); ++i) out += (i ? ", " : "") + describe(G, C.vertices[kappa[i]]);
    return out + "}";
}

namespace {

Morphism inverse_on(const FusionSystem& FS, const Subgroup& target, const Morphism& m) {
    const PermGroup& G = FS.group();
    Morphism inv;
    inv.conjugator = G.inv(m.conjugator);
    for (Index q : FS.canonical(target).generators()) inv.images.push_back(G.conj(q, inv.conjugator));
    return inv;
}

bool contains(const std::vector<Morphism>& set, const Morphism& m) {
    return std::binary_search(set.begin(), set.end(), m);
}

}  // namespace

CommutingCategory commuting_category(FusionSystem& FS, std::uint32_t p) {
    const PermGroup& G = FS.group();
    CommutingCategory C;
    const auto graph = commuting::commuting_graph_on(G, perm::order_p_subgroups_of(G, FS.defect_group(), p));
    C.vertices = graph.vertices;

    std::vector<Element> current;
    std::function<void(const std::vector<Element>&)> grow = [&](const std::vector<Element>& cand) {
        for (Element v : cand) {
            current.push_back(v);
            C.objects.push_back(current);
            std::vector<Element> next;
            for (Element w : graph.adjacency[v])
                if (w > v && std::binary_search(cand.begin(), cand.end(), w)) next.push_back(w);
            grow(next);
            current.pop_back();
        }
    };
    std::vector<Element> all(C.vertices.size());
    std::iota(all.begin(), all.end(), 0);
    grow(all);
    std::stable_sort(C.objects.begin(), C.objects.end(), [](const auto& a, const auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    for (const auto& kappa : C.objects) {
        std::vector<Subgroup> members;
        for (Element v : kappa) members.push_back(C.vertices[v]);
        C.products.push_back(commuting::pi(G, members));
    }

    const std::size_t n = C.objects.size();
    C.homs.assign(n, std::vector<std::vector<Morphism>>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<bool> in_target(C.vertices.size(), false);
            for (Element v : C.objects[j]) in_target[v] = true;
            for (const auto& m : FS.hom(C.products[i], C.products[j])) {
                bool ok = true;
                for (Element v : C.objects[i]) {
                    auto w = graph.vertex_of(perm::conjugate_subgroup(G, C.vertices[v], m.conjugator));
                    if (!w || !in_target[*w]) {
                        ok = false;
                        break;
                    }
                }
                if (ok) C.homs[i][j].push_back(m);
            }
        }

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (const auto& phi : C.homs[i][j])
                for (std::size_t k = 0; k < n; ++k)
                    for (const auto& psi : C.homs[j][k])
                        if (!contains(C.homs[i][k], FS.compose(C.products[i], phi, psi)))
                            throw TheoryViolation("composite " + describe(G, C, static_cast<Element>(i)) + " -> " +
                                                  describe(G, C, static_cast<Element>(k)) + " is not a morphism");
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& phi : C.homs[i][i])
            if (!contains(C.homs[i][i], inverse_on(FS, C.products[i], phi)))
                throw TheoryViolation("endomorphism of " + describe(G, C, static_cast<Element>(i)) +
                                      " is not invertible");
    return C;
}

IsoClassPoset iso_class_poset(FusionSystem& FS, const CommutingCategory& C) {
    const PermGroup& G = FS.group();
    const std::size_t n = C.objects.size();
    auto iso = [&](std::size_t i, std::size_t j) {
        if (C.products[i].order() != C.products[j].order() || C.objects[i].size() != C.objects[j].size()) return false;
        for (const auto& m : C.homs[i][j])
            if (contains(C.homs[j][i], inverse_on(FS, C.products[j], m))) return true;
        return false;
    };
    IsoClassPoset out;
    out.class_of.assign(n, 0);
    std::vector<bool> placed(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (placed[i]) continue;
        const auto id = static_cast<Element>(out.classes.size());
        out.classes.emplace_back();
        for (std::size_t j = i; j < n; ++j)
            if (!placed[j] && iso(i, j)) {
                placed[j] = true;
                out.class_of[j] = id;
                out.classes.back().push_back(static_cast<Element>(j));
            }
    }
    // Hom-nonemptiness must not depend on the chosen representatives.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const auto ri = out.classes[out.class_of[i]].front();
            const auto rj = out.classes[out.class_of[j]].front();
            if (C.homs[i][j].empty() != C.homs[ri][rj].empty())
                throw TheoryViolation("hom-set emptiness is not constant on isomorphism classes");
        }
    std::vector<std::string> labels;
    for (const auto& cls : out.classes) labels.push_back("[" + describe(G, C, cls.front()) + "]");
    out.poset = topo::Poset::from_predicate(
        out.classes.size(),
        [&](Element a, Element b) { return !C.homs[out.classes[a].front()][out.classes[b].front()].empty(); },
        std::move(labels));
    return out;
}

// ---------------------------------------------------------------------------

Theorem2Result theorem2_check(LocalStructure& L, const alg::Block& b, const commuting::KPoset& K) {
    const PermGroup& G = L.group();
    const std::uint32_t p = L.prime();
    FusionSystem FS(L, b);
    const auto C = commuting_category(FS, p);
    const auto I = iso_class_poset(FS, C);
    const auto O = topo::orbit_poset(K.poset);

    Theorem2Result out;
    out.class_count = I.classes.size();
    out.orbit_count = O.orbits.size();
    constexpr Element unset = static_cast<Element>(-1);
    out.forward.assign(out.class_count, unset);
    out.eta.assign(out.orbit_count, unset);

    // [κ] ↦ G-orbit of (κ, e) with (Πκ, e) ≤ (P, e_P).
    for (Element i = 0; i < C.objects.size(); ++i) {
        std::vector<Element> kappa;
        for (Element v : C.objects[i]) {
            auto w = K.graph.vertex_of(C.vertices[v]);
            if (!w) throw TheoryViolation("order-p subgroup of the defect group has vanishing Brauer image");
            kappa.push_back(*w);
        }
        std::sort(kappa.begin(), kappa.end());
        auto y = K.find(kappa, FS.subpair(C.products[i]).e);
        if (!y) {
            out.forward_well_defined = false;
            out.witnesses.push_back("no element of K(b) over " + describe(G, C, i));
            continue;
        }
        Element& slot = out.forward[I.class_of[i]];
        const Element orbit = O.orbit_of[*y];
        if (slot != unset && slot != orbit) {
            out.forward_well_defined = false;
            out.witnesses.push_back("forward map depends on the representative at " + describe(G, C, i));
        }
        slot = orbit;
    }

    std::map<std::vector<Element>, Element> object_of;
    for (Element i = 0; i < C.objects.size(); ++i) object_of[C.objects[i]] = i;

    // η([(κ, e)]) = [κ^g] for any g with (Πκ, e)^g ≤ (P, e_P); every such g is checked.
    for (Element o = 0; o < out.orbit_count; ++o) {
        const auto& el = K.elements[O.orbits[o].front()];
        std::optional<Element> image;
        for (Index g = 0; g < G.order(); ++g) {
            if (!maps_into(G, el.product, FS.defect_group(), g)) continue;
            const Subgroup Sg = perm::conjugate_subgroup(G, el.product, g);
            const auto& target = FS.subpair(Sg);
            if (conjugate_coordinates(L, el.e, Sg, g) != L.local(Sg).blocks[target.block].class_coords) continue;
            std::vector<Element> kappa;
            for (Element v : el.kappa) {
                const Subgroup moved = perm::conjugate_subgroup(G, K.graph.vertices[v], g);
                auto it = std::lower_bound(C.vertices.begin(), C.vertices.end(), moved);
                kappa.push_back(static_cast<Element>(it - C.vertices.begin()));
            }
            std::sort(kappa.begin(), kappa.end());
            const Element cls = I.class_of[object_of.at(kappa)];
            if (image && *image != cls) {
                out.eta_well_defined = false;
                out.witnesses.push_back("η depends on the conjugating element at " + K.poset.poset().label(O.orbits[o].front()));
                break;
            }
            image = cls;
        }
        if (!image) {
            out.eta_well_defined = false;
            out.witnesses.push_back("no conjugate of " + K.poset.poset().label(O.orbits[o].front()) +
                                    " lies below the maximal pair");
            continue;
        }
        out.eta[o] = *image;
    }

    if (!out.forward_well_defined || !out.eta_well_defined || out.class_count != out.orbit_count) {
        out.mutually_inverse = false;
        if (out.class_count != out.orbit_count)
            out.witnesses.push_back("class count " + std::to_string(out.class_count) + " differs from orbit count " +
                                    std::to_string(out.orbit_count));
        return out;
    }
    for (Element c = 0; c < out.class_count; ++c)
        if (out.forward[c] == unset || out.eta[out.forward[c]] != c) {
            out.mutually_inverse = false;
            out.witnesses.push_back("η does not invert the forward map at " + I.poset.label(c));
        }
    for (Element o = 0; o < out.orbit_count; ++o)
        if (out.forward[out.eta[o]] != o) {
            out.mutually_inverse = false;
            out.witnesses.push_back("the forward map does not invert η at " + O.poset.label(o));
        }
    if (!out.mutually_inverse) return out;
    out.forward_iso = topo::poset_iso_check(I.poset, O.poset, out.forward);
    out.inverse_iso = topo::poset_iso_check(O.poset, I.poset, out.eta);
    if (!out.forward_iso.pass) out.witnesses.push_back(out.forward_iso.witness);
    if (!out.inverse_iso.pass) out.witnesses.push_back(out.inverse_iso.witness);
    return out;
}

}  // namespace commcat::fusion
