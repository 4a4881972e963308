#include "commcat/perm.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include <boost/container_hash/hash.hpp>

namespace commcat::perm {

Permutation::Permutation(std::vector<std::uint32_t> images) : images_(std::move(images)) {
    std::vector<char> hit(images_.size(), 0);
    for (auto v : images_) {
        if (v >= images_.size() || hit[v]) throw GroupError("permutation images are not a bijection");
        hit[v] = 1;
    }
}

Permutation Permutation::identity(std::size_t degree) {
    std::vector<std::uint32_t> im(degree);
    std::iota(im.begin(), im.end(), 0u);
    return Permutation(std::move(im));
}

Permutation Permutation::from_cycles(std::size_t degree, const std::vector<std::vector<std::uint32_t>>& cycles) {
    std::vector<std::uint32_t> im(degree);
    std::iota(im.begin(), im.end(), 0u);
    std::vector<char> used(degree, 0);
    for (const auto& cyc : cycles) {
        for (std::size_t i = 0; i < cyc.size(); ++i) {
            auto a = cyc[i];
            auto b = cyc[(i + 1) % cyc.size()];
            if (a < 1 || a > degree || b < 1 || b > degree)
                throw GroupError("cycle point out of range 1.." + std::to_string(degree));
            if (used[a - 1]) throw GroupError("point " + std::to_string(a) + " repeated in cycles");
            used[a - 1] = 1;
            im[a - 1] = b - 1;
        }
    }
    return Permutation(std::move(im));
}

bool Permutation::is_identity() const {
    for (std::size_t i = 0; i < images_.size(); ++i)
        if (images_[i] != i) return false;
    return true;
}

Permutation Permutation::inverse() const {
    std::vector<std::uint32_t> im(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i) im[images_[i]] = static_cast<std::uint32_t>(i);
    Permutation r;
    r.images_ = std::move(im);
    return r;
}

std::string Permutation::to_string() const {
    std::ostringstream out;
    std::vector<char> seen(images_.size(), 0);
    bool any = false;
    for (std::size_t i = 0; i < images_.size(); ++i) {
        if (seen[i] || images_[i] == i) continue;
        out << '(';
        std::size_t j = i;
        bool first = true;
        while (!seen[j]) {
            seen[j] = 1;
            if (!first) out << ' ';
            out << j + 1;
            first = false;
            j = images_[j];
        }
        out << ')';
        any = true;
    }
    return any ? out.str() : "()";
}

Permutation compose(const Permutation& a, const Permutation& b) {
    if (a.degree() != b.degree()) throw GroupError("degree mismatch in compose");
    std::vector<std::uint32_t> im(a.degree());
    for (std::size_t i = 0; i < im.size(); ++i) im[i] = b[a[i]];
    return Permutation(std::move(im));
}

Permutation conjugate(const Permutation& x, const Permutation& g) { return compose(compose(g.inverse(), x), g); }

std::size_t PermutationHash::operator()(const Permutation& p) const noexcept {
    return boost::hash_range(p.images().begin(), p.images().end());
}

// ---------------------------------------------------------------------------

PermGroup PermGroup::from_generators(std::size_t degree, std::vector<Permutation> generators, std::string label,
                                     std::size_t max_elements) {
    for (const auto& g : generators)
        if (g.degree() != degree) throw GroupError("generator degree does not match group degree");
    std::unordered_set<Permutation, PermutationHash> seen;
    std::deque<Permutation> queue;
    auto id = Permutation::identity(degree);
    seen.insert(id);
    queue.push_back(id);
    while (!queue.empty()) {
        Permutation cur = std::move(queue.front());
        queue.pop_front();
        for (const auto& g : generators) {
            auto next = compose(cur, g);
            if (seen.insert(next).second) {
                if (seen.size() > max_elements)
                    throw SizeBoundExceeded("group enumeration exceeds bound of " + std::to_string(max_elements) +
                                            " elements");
                queue.push_back(std::move(next));
            }
        }
    }
    std::vector<Permutation> elements(seen.begin(), seen.end());
    std::sort(elements.begin(), elements.end());
    return from_elements(degree, std::move(elements), std::move(generators), std::move(label));
}

PermGroup PermGroup::from_elements(std::size_t degree, std::vector<Permutation> elements,
                                   std::vector<Permutation> generators, std::string label) {
    PermGroup G;
    G.degree_ = degree;
    G.label_ = std::move(label);
    std::sort(elements.begin(), elements.end());
    G.elements_ = std::move(elements);
    if (G.elements_.empty() || !G.elements_.front().is_identity())
        throw GroupError("element list must contain the identity");
    std::erase_if(generators, [](const Permutation& g) { return g.is_identity(); });
    G.generators_ = std::move(generators);
    G.index_elements();
    return G;
}

void PermGroup::index_elements() {
    index_.clear();
    index_.reserve(elements_.size() * 2);
    for (Index i = 0; i < elements_.size(); ++i) index_.emplace(elements_[i], i);
    inverse_.resize(elements_.size());
    for (Index i = 0; i < elements_.size(); ++i) inverse_[i] = index_of(elements_[i].inverse());
    generator_indices_.clear();
    for (const auto& g : generators_) generator_indices_.push_back(index_of(g));
    conj_tables_.assign(generators_.size(), std::vector<Index>(elements_.size()));
    for (std::size_t s = 0; s < generators_.size(); ++s)
        for (Index x = 0; x < elements_.size(); ++x) conj_tables_[s][x] = conj(x, generator_indices_[s]);
}

PermGroup PermGroup::symmetric(std::size_t n, std::size_t max_elements) {
    std::vector<Permutation> gens;
    if (n >= 2) {
        gens.push_back(Permutation::from_cycles(n, {{1, 2}}));
        if (n >= 3) {
            std::vector<std::uint32_t> cyc(n);
            std::iota(cyc.begin(), cyc.end(), 1u);
            gens.push_back(Permutation::from_cycles(n, {cyc}));
        }
    }
    return from_generators(std::max<std::size_t>(n, 1), std::move(gens), "S" + std::to_string(n), max_elements);
}

PermGroup PermGroup::dihedral(std::size_t order, std::size_t max_elements) {
    if (order < 4 || order % 2 != 0) throw GroupError("dihedral order must be even and at least 4");
    std::size_t n = order / 2;
    std::vector<std::uint32_t> rot(n), refl(n);
    for (std::size_t i = 0; i < n; ++i) {
        rot[i] = static_cast<std::uint32_t>((i + 1) % n);
        refl[i] = static_cast<std::uint32_t>((n - i) % n);
    }
    std::vector<Permutation> gens{Permutation(rot), Permutation(refl)};
    auto G = from_generators(n, std::move(gens), "D" + std::to_string(order), max_elements);
    if (G.order() != order) throw GroupError("dihedral construction produced wrong order");
    return G;
}

std::optional<Index> PermGroup::find(const Permutation& p) const {
    auto it = index_.find(p);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Index PermGroup::index_of(const Permutation& p) const {
    auto it = index_.find(p);
    if (it == index_.end()) throw GroupError("permutation " + p.to_string() + " is not in group " + label_);
    return it->second;
}

Index PermGroup::mul(Index a, Index b) const { return index_of(compose(elements_[a], elements_[b])); }

Index PermGroup::conj(Index x, Index g) const { return mul(mul(inverse_[g], x), g); }

Index PermGroup::power(Index a, std::uint64_t e) const {
    Index result = identity();
    Index base = a;
    while (e) {
        if (e & 1) result = mul(result, base);
        base = mul(base, base);
        e >>= 1;
    }
    return result;
}

std::size_t PermGroup::element_order(Index a) const {
    std::size_t n = 1;
    Index x = a;
    while (x != identity()) {
        x = mul(x, a);
        ++n;
    }
    return n;
}

std::size_t PermGroup::exponent() const {
    std::size_t e = 1;
    for (Index i = 0; i < order(); ++i) e = std::lcm(e, element_order(i));
    return e;
}

// ---------------------------------------------------------------------------

bool Subgroup::contains(Index x) const { return std::binary_search(members_.begin(), members_.end(), x); }

bool Subgroup::is_subgroup_of(const Subgroup& other) const {
    if (members_.size() > other.members_.size() || other.members_.size() % members_.size() != 0) return false;
    return std::includes(other.members_.begin(), other.members_.end(), members_.begin(), members_.end());
}

std::size_t SubgroupHash::operator()(const Subgroup& s) const noexcept {
    return boost::hash_range(s.members().begin(), s.members().end());
}

namespace {

std::vector<Index> closure(const PermGroup& G, std::span<const Index> gens, std::vector<Index> seed = {}) {
    std::vector<char> seen(G.order(), 0);
    std::vector<Index> out;
    seen[PermGroup::identity()] = 1;
    out.push_back(PermGroup::identity());
    for (auto s : seed)
        if (!seen[s]) {
            seen[s] = 1;
            out.push_back(s);
        }
    for (std::size_t head = 0; head < out.size(); ++head) {
        Index cur = out[head];
        for (auto g : gens) {
            Index nxt = G.mul(cur, g);
            if (!seen[nxt]) {
                seen[nxt] = 1;
                out.push_back(nxt);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Greedy small generating set for an already-closed member list.
std::vector<Index> greedy_generators(const PermGroup& G, const std::vector<Index>& members) {
    std::vector<Index> gens;
    std::vector<Index> current{PermGroup::identity()};
    for (auto x : members) {
        if (std::binary_search(current.begin(), current.end(), x)) continue;
        gens.push_back(x);
        current = closure(G, gens);
        if (current.size() == members.size()) break;
    }
    return gens;
}

Subgroup make_subgroup(const PermGroup& G, std::vector<Index> members) {
    std::sort(members.begin(), members.end());
    auto gens = greedy_generators(G, members);
    if (G.order() % members.size() != 0) throw GroupError("subgroup order does not divide group order");
    return Subgroup(std::move(members), std::move(gens));
}

}  // namespace

Subgroup trivial_subgroup(const PermGroup&) { return Subgroup({PermGroup::identity()}, {}); }

Subgroup whole_group(const PermGroup& G) {
    std::vector<Index> all(G.order());
    std::iota(all.begin(), all.end(), Index{0});
    return Subgroup(std::move(all), G.generator_indices());
}

Subgroup generated_subgroup(const PermGroup& G, std::span<const Index> generators) {
    std::vector<Index> gens;
    for (auto g : generators)
        if (g != PermGroup::identity() && std::find(gens.begin(), gens.end(), g) == gens.end()) gens.push_back(g);
    auto members = closure(G, gens);
    if (G.order() % members.size() != 0) throw GroupError("subgroup order does not divide group order");
    return Subgroup(std::move(members), std::move(gens));
}

Subgroup extend_subgroup(const PermGroup& G, const Subgroup& H, Index x) {
    if (H.contains(x)) return H;
    auto gens = H.generators();
    gens.push_back(x);
    auto members = closure(G, gens, H.members());
    return Subgroup(std::move(members), std::move(gens));
}

std::vector<Index> conjugate_members(const PermGroup& G, std::span<const Index> members, Index g) {
    std::vector<Index> out;
    out.reserve(members.size());
    for (auto m : members) out.push_back(G.conj(m, g));
    std::sort(out.begin(), out.end());
    return out;
}

Subgroup conjugate_subgroup(const PermGroup& G, const Subgroup& H, Index g) {
    std::vector<Index> gens;
    for (auto x : H.generators()) gens.push_back(G.conj(x, g));
    return Subgroup(conjugate_members(G, H.members(), g), std::move(gens));
}

Subgroup centralizer(const PermGroup& G, std::span<const Index> S) {
    std::vector<Index> members;
    for (Index g = 0; g < G.order(); ++g) {
        bool ok = true;
        for (auto s : S)
            if (!G.commute(g, s)) {
                ok = false;
                break;
            }
        if (ok) members.push_back(g);
    }
    return make_subgroup(G, std::move(members));
}

Subgroup centralizer(const PermGroup& G, const Subgroup& S) { return centralizer(G, S.generators()); }

bool normalizes(const PermGroup& G, Index g, const Subgroup& H) {
    for (auto h : H.generators())
        if (!H.contains(G.conj(h, g))) return false;
    return true;
}

Subgroup normalizer(const PermGroup& G, const Subgroup& H) {
    std::vector<Index> members;
    for (Index g = 0; g < G.order(); ++g)
        if (normalizes(G, g, H)) members.push_back(g);
    return make_subgroup(G, std::move(members));
}

Subgroup normalizer_in(const PermGroup& G, const Subgroup& K, const Subgroup& H) {
    std::vector<Index> members;
    for (auto g : K.members())
        if (normalizes(G, g, H)) members.push_back(g);
    return make_subgroup(G, std::move(members));
}

bool is_normal_in(const PermGroup& G, const Subgroup& H, const Subgroup& K) {
    if (!H.is_subgroup_of(K)) return false;
    for (auto k : K.generators())
        if (!normalizes(G, k, H)) return false;
    return true;
}

bool is_abelian(const PermGroup& G, const Subgroup& H) {
    const auto& gens = H.generators();
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i + 1; j < gens.size(); ++j)
            if (!G.commute(gens[i], gens[j])) return false;
    return true;
}

bool subgroups_commute(const PermGroup& G, const Subgroup& A, const Subgroup& B) {
    for (auto a : A.generators())
        for (auto b : B.generators())
            if (!G.commute(a, b)) return false;
    return true;
}

PermGroup as_group(const PermGroup& G, const Subgroup& H, std::string label) {
    std::vector<Permutation> elements;
    elements.reserve(H.order());
    for (auto m : H.members()) elements.push_back(G.element(m));
    std::vector<Permutation> gens;
    for (auto g : H.generators()) gens.push_back(G.element(g));
    return PermGroup::from_elements(G.degree(), std::move(elements), std::move(gens), std::move(label));
}

std::vector<ConjugacyClass> conjugacy_classes(const PermGroup& G) {
    std::vector<char> assigned(G.order(), 0);
    std::vector<ConjugacyClass> classes;
    for (Index i = 0; i < G.order(); ++i) {
        if (assigned[i]) continue;
        ConjugacyClass cls;
        cls.representative = i;
        cls.members.push_back(i);
        assigned[i] = 1;
        for (std::size_t head = 0; head < cls.members.size(); ++head) {
            Index cur = cls.members[head];
            for (std::size_t s = 0; s < G.generators().size(); ++s) {
                Index nxt = G.conjugation_table(s)[cur];
                if (!assigned[nxt]) {
                    assigned[nxt] = 1;
                    cls.members.push_back(nxt);
                }
            }
        }
        std::sort(cls.members.begin(), cls.members.end());
        classes.push_back(std::move(cls));
    }
    return classes;
}

std::uint64_t p_part(std::uint64_t n, std::uint64_t p) {
    std::uint64_t r = 1;
    while (n != 0 && n % p == 0) {
        n /= p;
        r *= p;
    }
    return r;
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

Subgroup sylow_subgroup(const PermGroup& G, std::uint32_t p) {
    if (!is_prime(p)) throw GroupError("sylow_subgroup: p must be prime");
    const auto target = p_part(G.order(), p);
    Subgroup P = trivial_subgroup(G);
    while (P.order() < target) {
        auto N = normalizer(G, P);
        bool grown = false;
        for (auto x : N.members()) {
            if (P.contains(x)) continue;
            if (!P.contains(G.power(x, p))) continue;
            P = extend_subgroup(G, P, x);
            grown = true;
            break;
        }
        if (!grown) throw GroupError("sylow_subgroup: failed to extend p-subgroup");
    }
    return P;
}

std::vector<Subgroup> order_p_subgroups_of(const PermGroup& G, const Subgroup& H, std::uint32_t p) {
    std::vector<Subgroup> out;
    std::unordered_set<Subgroup, SubgroupHash> seen;
    for (auto x : H.members()) {
        if (G.element_order(x) != p) continue;
        Index g[1] = {x};
        auto S = generated_subgroup(G, g);
        if (seen.insert(S).second) out.push_back(std::move(S));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Subgroup> order_p_subgroups(const PermGroup& G, std::uint32_t p) {
    return order_p_subgroups_of(G, whole_group(G), p);
}

std::vector<Subgroup> all_subgroups_of(const PermGroup& G, const Subgroup& H) {
    std::vector<Subgroup> found{trivial_subgroup(G)};
    std::unordered_set<Subgroup, SubgroupHash> seen{found.front()};
    for (std::size_t head = 0; head < found.size(); ++head) {
        const Subgroup K = found[head];
        for (auto x : H.members()) {
            if (K.contains(x)) continue;
            auto L = extend_subgroup(G, K, x);
            if (seen.insert(L).second) found.push_back(std::move(L));
        }
    }
    std::sort(found.begin(), found.end());
    return found;
}

std::vector<Subgroup> p_subgroups_up_to_conjugacy(const PermGroup& G, std::uint32_t p) {
    auto S = sylow_subgroup(G, p);
    SubgroupClassifier classifier(G);
    std::vector<Subgroup> reps;
    std::vector<char> have;
    for (auto& H : all_subgroups_of(G, S)) {
        auto place = classifier.classify(H);
        if (place.class_id >= have.size()) have.resize(place.class_id + 1, 0);
        if (!have[place.class_id]) {
            have[place.class_id] = 1;
            reps.push_back(H);
        }
    }
    return reps;
}

ElementaryAbelian is_elementary_abelian(const PermGroup& G, const Subgroup& Q, std::uint32_t p) {
    if (!is_abelian(G, Q)) return {};
    for (auto x : Q.members())
        if (G.power(x, p) != PermGroup::identity()) return {};
    std::size_t rank = 0;
    for (std::size_t n = Q.order(); n > 1; n /= p) {
        if (n % p != 0) return {};
        ++rank;
    }
    return {true, rank};
}

Fingerprint fingerprint(const PermGroup& G, const Subgroup& Q, std::uint32_t p) {
    Fingerprint f;
    f.order = Q.order();
    f.abelian = is_abelian(G, Q);
    f.exponent = 1;
    for (auto x : Q.members()) {
        auto o = G.element_order(x);
        f.exponent = std::lcm(f.exponent, o);
        if (o == Q.order()) f.cyclic = true;
        if (o == p) ++f.order_p_elements;
    }
    return f;
}

std::string Fingerprint::describe() const {
    std::ostringstream out;
    out << "order=" << order << " exponent=" << exponent << (abelian ? " abelian" : " nonabelian")
        << (cyclic ? " cyclic" : " noncyclic") << " order_p_elements=" << order_p_elements;
    if (is_dihedral_8()) out << " (D8)";
    return out.str();
}

// ---------------------------------------------------------------------------

SubgroupClassifier::Placement SubgroupClassifier::classify(const Subgroup& H) {
    if (auto it = placed_.find(H); it != placed_.end()) return it->second;
    const PermGroup& G = *group_;
    // h[k] satisfies H^h[k] = orbit[k]
    std::vector<Subgroup> orbit{H};
    std::vector<Index> via{PermGroup::identity()};
    std::unordered_map<Subgroup, std::size_t, SubgroupHash> pos{{H, 0}};
    for (std::size_t head = 0; head < orbit.size(); ++head) {
        for (std::size_t s = 0; s < G.generators().size(); ++s) {
            const auto& table = G.conjugation_table(s);
            std::vector<Index> m;
            m.reserve(orbit[head].order());
            for (auto x : orbit[head].members()) m.push_back(table[x]);
            std::sort(m.begin(), m.end());
            std::vector<Index> gens;
            for (auto x : orbit[head].generators()) gens.push_back(table[x]);
            Subgroup next(std::move(m), std::move(gens));
            if (pos.contains(next)) continue;
            pos.emplace(next, orbit.size());
            via.push_back(G.mul(via[head], G.generator_indices()[s]));
            orbit.push_back(std::move(next));
        }
    }
    std::size_t least = 0;
    for (std::size_t k = 1; k < orbit.size(); ++k)
        if (orbit[k].members() < orbit[least].members()) least = k;
    const std::size_t id = reps_.size();
    const Index back = G.inv(via[least]);
    for (std::size_t k = 0; k < orbit.size(); ++k) placed_.emplace(orbit[k], Placement{id, G.mul(back, via[k])});
    reps_.push_back(orbit[least]);
    members_.push_back(std::move(orbit));
    return placed_.at(H);
}

bool SubgroupClassifier::conjugate(const Subgroup& A, const Subgroup& B) {
    if (A.order() != B.order()) return false;
    return classify(A).class_id == classify(B).class_id;
}

std::optional<Index> SubgroupClassifier::conjugator_into(const Subgroup& A, const Subgroup& B) const {
    const PermGroup& G = *group_;
    if (B.order() % A.order() != 0) return std::nullopt;
    for (Index g = 0; g < G.order(); ++g) {
        bool ok = true;
        for (auto a : A.generators())
            if (!B.contains(G.conj(a, g))) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    return std::nullopt;
}

}  // namespace commcat::perm
