#include "commcat/commuting.hpp"

#include <algorithm>
#include <functional>

#include <boost/dynamic_bitset.hpp>

namespace commcat::commuting {

using brauer::describe;

Subgroup pi(const PermGroup& G, std::span<const Subgroup> kappa) {
    std::vector<Index> gens;
    for (std::size_t i = 0; i < kappa.size(); ++i) {
        for (std::size_t j = i + 1; j < kappa.size(); ++j)
            if (!perm::subgroups_commute(G, kappa[i], kappa[j]))
                throw std::invalid_argument(describe(G, kappa[i]) + " and " + describe(G, kappa[j]) +
                                            " do not commute");
        gens.insert(gens.end(), kappa[i].generators().begin(), kappa[i].generators().end());
    }
    return perm::generated_subgroup(G, gens);
}

std::vector<Subgroup> c_of(const PermGroup& G, const Subgroup& Q, std::uint32_t p) {
    if (!perm::is_abelian(G, Q)) throw std::invalid_argument(describe(G, Q) + " is not abelian");
    return perm::order_p_subgroups_of(G, Q, p);
}

std::size_t CommutingGraph::edge_count() const {
    std::size_t twice = 0;
    for (const auto& a : adjacency) twice += a.size();
    return twice / 2;
}

std::optional<Element> CommutingGraph::vertex_of(const Subgroup& Q) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), Q);
    if (it == vertices.end() || !(*it == Q)) return std::nullopt;
    return static_cast<Element>(it - vertices.begin());
}

bool CommutingGraph::adjacent(Element u, Element v) const {
    return std::binary_search(adjacency[u].begin(), adjacency[u].end(), v);
}

CommutingGraph commuting_graph_on(const PermGroup& G, std::vector<Subgroup> vertices) {
    std::sort(vertices.begin(), vertices.end());
    CommutingGraph out;
    out.vertices = std::move(vertices);
    const auto n = static_cast<Element>(out.vertices.size());
    out.adjacency.resize(n);
    for (Element u = 0; u < n; ++u)
        for (Element v = u + 1; v < n; ++v)
            if (perm::subgroups_commute(G, out.vertices[u], out.vertices[v])) {
                out.adjacency[u].push_back(v);
                out.adjacency[v].push_back(u);
            }
    for (auto& a : out.adjacency) std::sort(a.begin(), a.end());
    return out;
}

CommutingGraph commuting_graph(const PermGroup& G, std::uint32_t p) {
    return commuting_graph_on(G, perm::order_p_subgroups(G, p));
}

std::optional<Element> APoset::find(const Subgroup& Q, const alg::GroupAlgebraElement& e) const {
    auto it = by_subgroup.find(Q);
    if (it == by_subgroup.end()) return std::nullopt;
    for (Element i : it->second)
        if (elements[i].e == e) return i;
    return std::nullopt;
}

std::optional<Element> KPoset::find(const std::vector<Element>& kappa, const alg::GroupAlgebraElement& e) const {
    auto it = by_kappa.find(kappa);
    if (it == by_kappa.end()) return std::nullopt;
    for (Element i : it->second)
        if (elements[i].e == e) return i;
    return std::nullopt;
}

// ---------------------------------------------------------------------------

APoset build_A(LocalStructure& L, const alg::Block& b) {
    const PermGroup& G = L.group();
    const std::uint32_t p = L.prime();
    const auto defect = brauer::defect_groups(L, b);
    auto& classifier = L.classifier();

    // Nontrivial elementary abelian subgroups conjugate into the defect group.
    std::vector<Subgroup> family;
    std::vector<char> seen_class;
    for (const auto& H : perm::all_subgroups_of(G, defect.defect_group)) {
        if (H.is_trivial() || !perm::is_elementary_abelian(G, H, p).value) continue;
        const auto id = classifier.classify(H).class_id;
        if (id >= seen_class.size()) seen_class.resize(id + 1, 0);
        if (seen_class[id]) continue;
        seen_class[id] = 1;
        for (const auto& conj : classifier.class_members(id))
            if (!brauer::brauer_vanishes(L, conj, b)) family.push_back(conj);
    }

    APoset out;
    auto P = brauer::containment_poset(L, b, std::move(family));
    out.elements = std::move(P.pairs);
    out.poset = std::move(P.poset);
    for (Element i = 0; i < out.elements.size(); ++i) out.by_subgroup[out.elements[i].Q].push_back(i);
    return out;
}

KPoset build_K(LocalStructure& L, const alg::Block& b, const APoset& A, std::size_t max_elements) {
    const PermGroup& G = L.group();
    const std::uint32_t p = L.prime();

    std::vector<Subgroup> live;
    for (const auto& Q : perm::order_p_subgroups(G, p))
        if (!brauer::brauer_vanishes(L, Q, b)) live.push_back(Q);
    KPoset out;
    out.graph = commuting_graph_on(G, std::move(live));
    const auto& graph = out.graph;

    std::vector<KElement> found;
    std::vector<Element> kappa;
    std::function<void(const Subgroup&, const std::vector<Element>&)> grow = [&](const Subgroup& product,
                                                                                 const std::vector<Element>& cand) {
        for (Element v : cand) {
            Subgroup next = perm::extend_subgroup(G, product, graph.vertices[v].generators().front());
            // Brauer images vanish upward, so a vanishing product prunes the branch.
            if (brauer::brauer_vanishes(L, next, b)) continue;
            if (!perm::is_elementary_abelian(G, next, p).value)
                throw brauer::TheoryViolation("product of commuting order-p subgroups is not elementary abelian");
            kappa.push_back(v);
            for (auto& pair : brauer::brauer_pairs_for(L, b, next)) {
                if (found.size() >= max_elements)
                    throw ElementBoundExceeded("K(b) exceeds " + std::to_string(max_elements) + " elements");
                found.push_back(KElement{kappa, next, pair.block, std::move(pair.e)});
            }
            std::vector<Element> narrowed;
            std::set_intersection(cand.begin(), cand.end(), graph.adjacency[v].begin(), graph.adjacency[v].end(),
                                  std::back_inserter(narrowed));
            narrowed.erase(narrowed.begin(), std::upper_bound(narrowed.begin(), narrowed.end(), v));
            grow(next, narrowed);
            kappa.pop_back();
        }
    };
    std::vector<Element> all(graph.vertices.size());
    for (Element v = 0; v < all.size(); ++v) all[v] = v;
    grow(perm::trivial_subgroup(G), all);

    std::stable_sort(found.begin(), found.end(), [](const KElement& x, const KElement& y) {
        if (x.kappa.size() != y.kappa.size()) return x.kappa.size() < y.kappa.size();
        if (x.kappa != y.kappa) return x.kappa < y.kappa;
        return x.block < y.block;
    });
    out.elements = std::move(found);
    const auto n = static_cast<Element>(out.elements.size());
    for (Element i = 0; i < n; ++i) out.by_kappa[out.elements[i].kappa].push_back(i);

    // Brauer-pair position of each element inside A.
    std::vector<Element> in_a(n);
    for (Element i = 0; i < n; ++i) {
        auto a = A.find(out.elements[i].product, out.elements[i].e);
        if (!a) throw brauer::TheoryViolation("(Πκ, e) is missing from A(b) at " + describe(G, out.elements[i].product));
        in_a[i] = *a;
    }

    // (λ, f) < (κ, e) iff λ ⊊ κ and (Πλ, f) ≤ (Πκ, e).
    std::vector<std::pair<Element, Element>> rel;
    for (Element j = 0; j < n; ++j) {
        const auto& kap = out.elements[j].kappa;
        const std::size_t m = kap.size();
        for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << m); ++mask) {
            std::vector<Element> lambda;
            for (std::size_t t = 0; t < m; ++t)
                if (mask >> t & 1) lambda.push_back(kap[t]);
            auto it = out.by_kappa.find(lambda);
            if (it == out.by_kappa.end()) continue;
            for (Element i : it->second)
                if (A.poset.poset().leq(in_a[i], in_a[j])) rel.emplace_back(i, j);
        }
    }
    std::vector<std::string> labels;
    for (Element i = 0; i < n; ++i) labels.push_back(describe(G, out, i));
    topo::Poset order = topo::Poset::from_relation(n, rel, std::move(labels));

    std::vector<std::vector<Element>> action;
    for (std::size_t s = 0; s < G.generators().size(); ++s) {
        const auto& table = G.conjugation_table(s);
        const Index g = G.generator_indices()[s];
        std::vector<Element> vmap(graph.vertices.size());
        for (Element v = 0; v < vmap.size(); ++v) {
            auto w = graph.vertex_of(perm::conjugate_subgroup(G, graph.vertices[v], g));
            if (!w) throw brauer::TheoryViolation("conjugation does not preserve the live vertex set");
            vmap[v] = *w;
        }
        std::vector<Element> image(n);
        for (Element i = 0; i < n; ++i) {
            std::vector<Element> moved;
            for (Element v : out.elements[i].kappa) moved.push_back(vmap[v]);
            std::sort(moved.begin(), moved.end());
            auto k = out.find(moved, out.elements[i].e.conjugate_by_table(table));
            if (!k) throw brauer::TheoryViolation("conjugate of " + describe(G, out, i) + " is missing from K(b)");
            image[i] = *k;
        }
        action.push_back(std::move(image));
    }
    out.poset = topo::GPoset(std::move(order), std::move(action));
    if (auto msg = out.poset.check_action(); !msg.empty()) throw brauer::TheoryViolation("K(b) action: " + msg);
    return out;
}

std::string describe(const PermGroup& G, const KPoset& K, Element y) {
    const auto& el = K.elements[y];
    std::string out = "({";
    for (std::size_t i = 0; i < el.kappa.size(); ++i) out += (i ? ", " : "") + describe(G, K.graph.vertices[el.kappa[i]]);
    return out + "}, e" + std::to_string(el.block) + ")";
}

// ---------------------------------------------------------------------------

Element phi(const PermGroup& G, std::uint32_t p, const APoset& A, const KPoset& K, Element x) {
    const auto& pair = A.elements[x];
    std::vector<Element> kappa;
    for (const auto& C : c_of(G, pair.Q, p)) {
        auto v = K.graph.vertex_of(C);
        if (!v) throw brauer::TheoryViolation("order-p subgroup of " + describe(G, pair.Q) + " is not a live vertex");
        kappa.push_back(*v);
    }
    std::sort(kappa.begin(), kappa.end());
    auto y = K.find(kappa, pair.e);
    if (!y) throw brauer::TheoryViolation("(c(Q), e) is not in K(b) for " + describe(G, pair));
    return *y;
}

Element psi(const APoset& A, const KPoset& K, Element y) {
    auto x = A.find(K.elements[y].product, K.elements[y].e);
    if (!x) throw brauer::TheoryViolation("(Πκ, e) is not in A(b)");
    return *x;
}

std::vector<Element> phi_map(const PermGroup& G, std::uint32_t p, const APoset& A, const KPoset& K) {
    std::vector<Element> out(A.elements.size());
    for (Element x = 0; x < out.size(); ++x) out[x] = phi(G, p, A, K, x);
    return out;
}

std::vector<Element> psi_map(const APoset& A, const KPoset& K) {
    std::vector<Element> out(K.elements.size());
    for (Element y = 0; y < out.size(); ++y) out[y] = psi(A, K, y);
    return out;
}

Theorem1Result theorem1_check(const PermGroup& G, std::uint32_t p, const APoset& A, const KPoset& K) {
    Theorem1Result out;
    out.a_size = A.elements.size();
    out.k_size = K.elements.size();
    const auto F = phi_map(G, p, A, K);
    const auto H = psi_map(A, K);
    for (Element x = 0; x < F.size(); ++x)
        if (H[F[x]] != x) {
            out.psi_phi_identity = false;
            out.witnesses.push_back("Ψ(Φ(x)) ≠ x at " + A.poset.poset().label(x));
            break;
        }
    for (Element y = 0; y < H.size(); ++y) {
        if (K.poset.poset().leq(y, F[H[y]])) {
            ++out.below_round_trip;
        } else if (out.witnesses.size() < 8) {
            out.witnesses.push_back("y is not below Φ(Ψ(y)) at " + K.poset.poset().label(y));
        }
    }
    out.certificate = topo::quillen_pair_check(A.poset, K.poset, F, H);
    for (const auto& w : out.certificate.witnesses) out.witnesses.push_back(w);
    return out;
}

HomologyAgreement homology_agreement(const topo::Poset& A, const topo::Poset& K, std::size_t max_simplices) {
    HomologyAgreement out;
    out.euler_a = topo::order_complex_euler(A);
    out.euler_k = topo::order_complex_euler(K);
    try {
        auto ca = topo::order_complex(A, max_simplices);
        auto ck = topo::order_complex(K, max_simplices);
        if (ca.euler_characteristic() != out.euler_a || ck.euler_characteristic() != out.euler_k)
            throw std::logic_error("chain count disagrees with the order complex");
        out.homology_a = topo::homology(ca);
        out.homology_k = topo::homology(ck);
        out.computed = true;
    } catch (const topo::SimplexBoundExceeded& e) {
        out.skipped_reason = e.what();
    }
    return out;
}

// ---------------------------------------------------------------------------

std::optional<Obstruction> clique_witness(LocalStructure& L, const alg::Block& b, const KPoset& K) {
    const auto& X = K.poset.poset();
    const auto minimal = X.minimal_elements();
    const std::size_t m = minimal.size();
    if (m == 0) return std::nullopt;
    std::vector<std::int64_t> slot(X.size(), -1);
    for (std::size_t i = 0; i < m; ++i) slot[minimal[i]] = static_cast<std::int64_t>(i);

    // Minimal elements below each u.
    std::vector<boost::dynamic_bitset<>> under(X.size(), boost::dynamic_bitset<>(m));
    for (Element u = 0; u < X.size(); ++u) {
        if (slot[u] >= 0) under[u].set(static_cast<std::size_t>(slot[u]));
        for (Element d : X.below(u))
            if (slot[d] >= 0) under[u].set(static_cast<std::size_t>(slot[d]));
    }
    std::vector<boost::dynamic_bitset<>> adj(m, boost::dynamic_bitset<>(m));
    for (const auto& set : under)
        for (auto i = set.find_first(); i != set.npos; i = set.find_next(i))
            for (auto j = set.find_next(i); j != set.npos; j = set.find_next(j)) {
                adj[i].set(j);
                adj[j].set(i);
            }
    auto covered = [&](const boost::dynamic_bitset<>& c) {
        for (const auto& set : under)
            if (c.is_subset_of(set)) return true;
        return false;
    };

    // Bron–Kerbosch with pivoting over maximal cliques.
    std::vector<boost::dynamic_bitset<>> maximal;
    std::function<void(boost::dynamic_bitset<>, boost::dynamic_bitset<>, boost::dynamic_bitset<>)> bk =
        [&](boost::dynamic_bitset<> R, boost::dynamic_bitset<> P, boost::dynamic_bitset<> Xs) {
            if (P.none() && Xs.none()) {
                maximal.push_back(R);
                return;
            }
            const auto PX = P | Xs;
            std::size_t pivot = PX.find_first(), best = 0;
            for (auto u = PX.find_first(); u != PX.npos; u = PX.find_next(u)) {
                const auto c = (P & adj[u]).count();
                if (c >= best) {
                    best = c;
                    pivot = u;
                }
            }
            const auto todo = P - adj[pivot];
            for (auto v = todo.find_first(); v != todo.npos; v = todo.find_next(v)) {
                auto R2 = R;
                R2.set(v);
                bk(R2, P & adj[v], Xs & adj[v]);
                P.reset(v);
                Xs.set(v);
            }
        };
    boost::dynamic_bitset<> all(m);
    all.set();
    bk(boost::dynamic_bitset<>(m), all, boost::dynamic_bitset<>(m));
    std::sort(maximal.begin(), maximal.end());

    std::optional<std::vector<std::size_t>> best;
    for (const auto& C : maximal) {
        if (covered(C)) continue;
        std::vector<std::size_t> members;
        for (auto i = C.find_first(); i != C.npos; i = C.find_next(i)) members.push_back(i);
        // Smallest uncovered sub-clique, lexicographically first at that size.
        for (std::size_t size = 3; size <= members.size(); ++size) {
            std::vector<bool> pick(members.size(), false);
            std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(size), true);
            std::optional<std::vector<std::size_t>> hit;
            do {
                boost::dynamic_bitset<> sub(m);
                std::vector<std::size_t> chosen;
                for (std::size_t t = 0; t < members.size(); ++t)
                    if (pick[t]) {
                        sub.set(members[t]);
                        chosen.push_back(members[t]);
                    }
                if (!covered(sub)) {
                    hit = chosen;
                    break;
                }
            } while (std::prev_permutation(pick.begin(), pick.end()));
            if (hit) {
                if (!best || hit->size() < best->size() || (hit->size() == best->size() && *hit < *best)) best = hit;
                break;
            }
        }
    }
    if (!best) return std::nullopt;

    Obstruction out;
    std::vector<Index> gens;
    for (std::size_t i : *best) {
        const Element y = minimal[i];
        out.clique.push_back(y);
        const auto& g = K.elements[y].product.generators();
        gens.insert(gens.end(), g.begin(), g.end());
    }
    out.generated = perm::generated_subgroup(L.group(), gens);
    out.brauer_zero = brauer::brauer_vanishes(L, out.generated, b);
    return out;
}

topo::IsoCheck principal_clique_check(const PermGroup& G, std::uint32_t p, const KPoset& K) {
    const CommutingGraph full = commuting_graph(G, p);
    const auto complex = topo::clique_complex(full.adjacency);
    std::vector<topo::Simplex> faces;
    const topo::Poset F = topo::face_poset(complex, &faces);
    std::vector<Element> map(faces.size());
    for (std::size_t i = 0; i < faces.size(); ++i) {
        std::vector<Element> kappa;
        for (Element v : faces[i]) {
            auto w = K.graph.vertex_of(full.vertices[v]);
            if (!w) return {false, "vertex " + describe(G, full.vertices[v]) + " has vanishing Brauer image"};
            kappa.push_back(*w);
        }
        std::sort(kappa.begin(), kappa.end());
        auto it = K.by_kappa.find(kappa);
        if (it == K.by_kappa.end() || it->second.size() != 1)
            return {false, "clique " + F.label(static_cast<Element>(i)) + " does not carry exactly one block"};
        map[i] = it->second.front();
    }
    return topo::poset_iso_check(F, K.poset.poset(), map);
}

}  // namespace commcat::commuting
