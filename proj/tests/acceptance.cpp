// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "commcat/harness.hpp"

using namespace commcat;
using boost::multiprecision::cpp_rational;
using topo::Element;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
    bool pass = true;
    std::ostringstream note;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) note << "FAILED: ";
            else note << "; ";
            note << what;
            pass = false;
        }
    }
};

std::string fmt(double s) {
    std::ostringstream o;
    o.precision(3);
    o << s << "s";
    return o.str();
}

struct Entry {
    harness::Target target;
    std::unique_ptr<harness::Session> session;
    std::vector<std::size_t> blocks;
};

std::vector<Entry>& corpus() {
    static std::vector<Entry> entries = [] {
        std::vector<Entry> out;
        for (auto& t : harness::default_corpus(true)) {
            Entry e{t, harness::open_session(t, harness::Options{}), {}};
            e.blocks = e.session->selected_blocks();
            out.push_back(std::move(e));
        }
        return out;
    }();
    return entries;
}

std::string name(const Entry& e, std::size_t block) {
    return e.target.group.label + "/p=" + std::to_string(e.target.prime) + "/b" + std::to_string(block);
}

// ---------------------------------------------------------------------------

void criterion1(Outcome& o) {
    struct Want {
        const char* group;
        std::uint32_t p;
        std::size_t blocks;
        double limit;
    };
    const std::vector<Want> wants{{"S3", 2, 2, 5},  {"S3", 3, 1, 5},  {"S4", 2, 1, 5},
                                  {"S5", 2, 2, 5},  {"D8", 2, 1, 5},  {"S7", 2, 2, 300}};
    for (const auto& w : wants) {
        auto start = Clock::now();
        harness::Target t{harness::GroupSpec::parse(w.group), w.p, 1, "all", false};
        auto s = harness::open_session(t, harness::Options{});
        std::vector<ff::Vector> computed;
        for (const auto& b : s->blocks()) computed.push_back(b.class_coords);
        double elapsed = seconds_since(start);
        alg::CentralAlgebra A(s->group, *s->field);
        auto oracle = alg::brute_force_central_idempotents(A);
        std::sort(computed.begin(), computed.end());
        std::sort(oracle.begin(), oracle.end());
        std::string tag = std::string(w.group) + "/p=" + std::to_string(w.p);
        o.require(computed == oracle, tag + " idempotents differ from the oracle");
        o.require(computed.size() == w.blocks, tag + " has " + std::to_string(computed.size()) + " blocks");
        o.require(elapsed <= w.limit, tag + " took " + fmt(elapsed));
        o.note << tag << ":" << computed.size() << " (" << fmt(elapsed) << ") ";
    }
}

void criterion2(Outcome& o) {
    auto& s7 = corpus().back();
    auto& L = *s7.session->local;
    const auto& b = L.blocks().at(1);
    o.require(!b.principal, "block 1 of S7 is principal");
    auto d = brauer::defect_groups(L, b);
    const auto& f = d.fingerprint;
    o.require(d.order() == 8, "defect order " + std::to_string(d.order()));
    o.require(!f.abelian && !f.cyclic && f.exponent == 4, "fingerprint " + f.describe());
    o.require(f.is_dihedral_8(), "not dihedral: " + f.describe());
    auto hit = harness::find_dihedral_block(6, 8, harness::Options{});
    o.require(hit.has_value(), "no hit in 6..8");
    if (hit) o.require(hit->n == 7, "hit at n=" + std::to_string(hit->n));
    o.note << "S7 defect " << brauer::describe(L.group(), d.defect_group) << " [" << f.describe() << "]; search 6..8 -> n="
           << (hit ? std::to_string(hit->n) : "none");
}

void criterion3(Outcome& o) {
    auto& L = *corpus().back().session->local;
    auto r = brauer::is_principal_type(L, L.blocks().at(1));
    o.require(r.checked == L.p_subgroup_classes().size(), "not every 2-subgroup class was examined");
    o.require(r.value, r.witness ? "fails at " + brauer::describe(L.group(), *r.witness) : "fails");
    std::size_t nonzero = 0;
    for (const auto& Q : L.p_subgroup_classes()) nonzero += !brauer::brauer_vanishes(L, Q, L.blocks()[1]);
    o.note << r.checked << " classes of 2-subgroups, " << nonzero << " with nonzero Brauer image, each a single block";
}

void criterion4(Outcome& o) {
    std::size_t blocks = 0, k_total = 0;
    for (auto& e : corpus()) {
        auto start = Clock::now();
        auto& L = *e.session->local;
        for (std::size_t bi : e.blocks) {
            const auto& b = L.blocks()[bi];
            auto A = commuting::build_A(L, b);
            auto K = commuting::build_K(L, b, A);
            auto r = commuting::theorem1_check(L.group(), L.prime(), A, K);
            std::string tag = name(e, bi);
            o.require(r.pass(), tag + " theorem 1 certificate fails");
            auto phi = commuting::phi_map(L.group(), L.prime(), A, K);
            auto psi = commuting::psi_map(A, K);
            for (Element x = 0; x < A.elements.size(); ++x)
                if (psi[phi[x]] != x) o.require(false, tag + " Psi(Phi(x)) != x at " + A.poset.poset().label(x));
            std::size_t below = 0;
            for (Element y = 0; y < K.elements.size(); ++y) below += K.poset.poset().leq(y, phi[psi[y]]);
            o.require(below == K.elements.size(), tag + " round trip not above every element");
            o.require(r.certificate.forward_order_preserving && r.certificate.backward_order_preserving,
                      tag + " not order-preserving");
            o.require(r.certificate.forward_equivariant && r.certificate.backward_equivariant, tag + " not equivariant");
            ++blocks;
            k_total += K.elements.size();
        }
        double elapsed = seconds_since(start);
        o.require(elapsed <= (e.target.slow ? 600.0 : 60.0), name(e, e.blocks.front()) + " took " + fmt(elapsed));
    }
    o.note << (o.pass ? "" : " ") << blocks << " blocks, " << k_total << " elements of K(b) in total";
}

void criterion5(Outcome& o) {
    std::size_t computed = 0, blocks = 0;
    for (auto& e : corpus()) {
        auto& L = *e.session->local;
        for (std::size_t bi : e.blocks) {
            const auto& b = L.blocks()[bi];
            auto A = commuting::build_A(L, b);
            auto K = commuting::build_K(L, b, A);
            auto h = commuting::homology_agreement(A.poset.poset(), K.poset.poset(), 100000);
            std::string tag = name(e, bi);
            o.require(h.euler_equal(), tag + " Euler characteristics differ");
            o.require(h.euler_a == topo::order_complex_euler(A.poset.poset()), tag + " Euler count mismatch");
            if (h.computed) {
                ++computed;
                o.require(h.homology_equal(), tag + " homology differs: " + h.homology_a.describe() + " vs " +
                                                  h.homology_k.describe());
                o.require(h.homology_a.euler_characteristic() == h.euler_a, tag + " homology and chain count disagree");
            }
            ++blocks;
        }
    }
    o.note << (o.pass ? "" : " ") << "homology compared on " << computed << " of " << blocks << " blocks";
    if (computed < blocks) o.note << " (the rest exceed 10^5 simplices)";
    o.note << ", Euler characteristics agree on all";
}

void criterion6(Outcome& o) {
    harness::Target t{harness::GroupSpec::parse("S4"), 2, 1, "principal", false};
    auto s = harness::open_session(t, harness::Options{});
    auto& L = *s->local;
    const auto& b = L.blocks().front();
    auto A = commuting::build_A(L, b);
    auto K = commuting::build_K(L, b, A);
    auto graph = commuting::commuting_graph(s->group, 2);
    o.require(graph.vertices.size() == 9, std::to_string(graph.vertices.size()) + " vertices");
    auto clique = topo::clique_complex(graph.adjacency);
    o.require(clique.face_count() == K.elements.size(), "face count differs from |K(b)|");
    auto iso = commuting::principal_clique_check(s->group, 2, K);
    o.require(iso.pass, "order isomorphism fails: " + iso.witness);
    o.note << (o.pass ? "" : " ") << "9 vertices, " << clique.face_count() << " faces, K(b) has " << K.elements.size()
           << " elements";
}

void criterion7(Outcome& o) {
    auto& e = corpus().back();
    auto& L = *e.session->local;
    const auto& G = L.group();
    const auto& b = L.blocks().at(1);
    auto A = commuting::build_A(L, b);
    auto K = commuting::build_K(L, b, A);
    auto ob = commuting::clique_witness(L, b, K);
    o.require(ob.has_value(), "no obstruction on the S7 block");
    if (ob) {
        const auto& P = K.poset.poset();
        o.require(ob->clique.size() == 3, "obstruction has " + std::to_string(ob->clique.size()) + " members");
        auto minimal = P.minimal_elements();
        std::vector<perm::Subgroup> subs;
        for (Element y : ob->clique) {
            o.require(std::find(minimal.begin(), minimal.end(), y) != minimal.end(), "member not minimal");
            subs.push_back(K.elements[y].product);
        }
        for (std::size_t i = 0; i < ob->clique.size(); ++i)
            for (std::size_t j = i + 1; j < ob->clique.size(); ++j) {
                bool bounded = false;
                for (Element z = 0; z < P.size() && !bounded; ++z)
                    bounded = P.leq(ob->clique[i], z) && P.leq(ob->clique[j], z);
                o.require(bounded, "a pair is not bounded above");
            }
        bool joint = false;
        for (Element z = 0; z < P.size() && !joint; ++z)
            joint = std::all_of(ob->clique.begin(), ob->clique.end(), [&](Element y) { return P.leq(y, z); });
        o.require(!joint, "the triple is bounded above");

        std::set<perm::Subgroup> pattern;
        for (const char* c : {"(1 2)", "(3 4)", "(5 6)"}) {
            perm::Index x = G.index_of(harness::parse_cycles(7, c));
            pattern.insert(perm::generated_subgroup(G, std::vector<perm::Index>{x}));
        }
        bool conj = false;
        for (perm::Index g = 0; g < G.order() && !conj; ++g) {
            std::set<perm::Subgroup> moved;
            for (const auto& Q : subs) moved.insert(perm::conjugate_subgroup(G, Q, g));
            conj = moved == pattern;
        }
        o.require(conj, "triple is not conjugate to <(1 2)>, <(3 4)>, <(5 6)>");
        auto generated = commuting::pi(G, subs);
        o.require(generated == ob->generated, "generated subgroup mismatch");
        o.require(ob->brauer_zero && brauer::brauer_vanishes(L, generated, b), "Brauer image of <x,y,z> is nonzero");
        o.note << "S7 triple";
        for (Element y : ob->clique) o.note << " " << commuting::describe(G, K, y);
        o.note << ", Br_" << brauer::describe(G, generated) << "(b) = 0;";
    }
    std::size_t principal = 0;
    for (auto& c : corpus()) {
        auto& Lc = *c.session->local;
        const auto& pb = Lc.blocks().front();
        if (std::find(c.blocks.begin(), c.blocks.end(), 0) == c.blocks.end()) continue;
        auto Ac = commuting::build_A(Lc, pb);
        auto Kc = commuting::build_K(Lc, pb, Ac);
        o.require(!commuting::clique_witness(Lc, pb, Kc), name(c, 0) + " has an obstruction");
        ++principal;
    }
    o.note << " none on " << principal << " principal blocks";
}

void criterion8(Outcome& o) {
    std::size_t blocks = 0;
    for (auto& e : corpus()) {
        auto& L = *e.session->local;
        for (std::size_t bi : e.blocks) {
            const auto& b = L.blocks()[bi];
            auto A = commuting::build_A(L, b);
            auto K = commuting::build_K(L, b, A);
            auto orbits = topo::orbit_poset(K.poset);
            auto r = fusion::theorem2_check(L, b, K);
            std::string tag = name(e, bi);
            o.require(r.pass(), tag + " theorem 2 fails");
            o.require(r.class_count == orbits.orbits.size(), tag + " class count differs from the orbit count");
            for (Element c = 0; c < r.forward.size(); ++c)
                if (r.eta.at(r.forward[c]) != c) o.require(false, tag + " eta is not inverse to the forward map");
            o.note << tag << ":" << r.class_count << " ";
            ++blocks;
        }
    }
    o.note << "(" << blocks << " blocks)";
}

// Rank over Q by exact fraction elimination.
std::size_t rational_rank(const topo::SparseIntMatrix& m) {
    std::vector<std::vector<cpp_rational>> a(m.rows, std::vector<cpp_rational>(m.cols));
    for (std::size_t c = 0; c < m.cols; ++c)
        for (auto [r, v] : m.columns[c]) a[r][c] = v;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < m.cols && rank < m.rows; ++c) {
        std::size_t p = rank;
        while (p < m.rows && a[p][c] == 0) ++p;
        if (p == m.rows) continue;
        std::swap(a[p], a[rank]);
        for (std::size_t r = 0; r < m.rows; ++r)
            if (r != rank && a[r][c] != 0) {
                cpp_rational f = a[r][c] / a[rank][c];
                for (std::size_t k = c; k < m.cols; ++k) a[r][k] -= f * a[rank][k];
            }
        ++rank;
    }
    return rank;
}

bool boundary_squares_to_zero(const topo::SparseIntMatrix& lo, const topo::SparseIntMatrix& hi) {
    for (const auto& col : hi.columns) {
        std::map<std::uint32_t, long long> acc;
        for (auto [mid, v] : col)
            for (auto [r, w] : lo.columns[mid]) acc[r] += v * w;
        for (auto& [r, v] : acc)
            if (v != 0) return false;
    }
    return true;
}

// Irreducibility by trial division over every monic polynomial of degree <= deg/2.
bool irreducible_by_search(const ff::Polynomial& g) {
    const auto& F = g.field();
    int n = g.degree();
    if (n <= 1) return n == 1;
    for (int d = 1; d <= n / 2; ++d) {
        std::uint64_t total = 1;
        for (int i = 0; i < d; ++i) total *= F.order();
        for (std::uint64_t code = 0; code < total; ++code) {
            ff::Vector c;
            std::uint64_t v = code;
            for (int i = 0; i < d; ++i, v /= F.order()) c.emplace_back(static_cast<std::uint32_t>(v % F.order()));
            c.push_back(F.one());
            if ((g % ff::Polynomial(F, c)).is_zero()) return false;
        }
    }
    return true;
}

void criterion9(Outcome& o) {
    std::mt19937_64 rng(9001);
    int betti_bad = 0, dd_bad = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 1 + rng() % 8;
        std::vector<topo::Simplex> faces;
        std::size_t count = 1 + rng() % 12;
        for (std::size_t i = 0; i < count; ++i) {
            topo::Simplex s;
            for (Element v = 0; v < n; ++v)
                if (rng() % 2) s.push_back(v);
            if (!s.empty()) faces.push_back(s);
        }
        auto k = topo::SimplicialComplex::from_faces(n, faces);
        auto h = topo::homology(k);
        auto bd = topo::boundary_matrices(k);
        for (std::size_t d = 1; d < bd.size(); ++d) dd_bad += !boundary_squares_to_zero(bd[d - 1], bd[d]);
        std::vector<std::size_t> rank(static_cast<std::size_t>(k.dimension()) + 2, 0);
        for (int d = 1; d <= k.dimension(); ++d) rank[d] = rational_rank(bd[d - 1]);
        for (int d = 0; d <= k.dimension(); ++d)
            betti_bad += h.groups[d].betti != k.faces(d).size() - rank[d] - rank[d + 1];
    }
    o.require(betti_bad == 0, std::to_string(betti_bad) + " betti mismatches");
    o.require(dd_bad == 0, std::to_string(dd_bad) + " nonzero boundary compositions");

    std::mt19937 prng(77);
    std::vector<ff::Field> primes{ff::Field(2), ff::Field(3), ff::Field(5)};
    int fact_bad = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto& F = primes[trial % 3];
        int deg = 1 + static_cast<int>(prng() % 8);
        ff::Vector c;
        for (int i = 0; i < deg; ++i) c.emplace_back(static_cast<std::uint32_t>(prng() % F.order()));
        c.emplace_back(static_cast<std::uint32_t>(1 + prng() % (F.order() - 1)));
        ff::Polynomial f(F, c);
        ff::Polynomial prod = ff::Polynomial::constant(F, f.leading());
        for (const auto& [g, m] : ff::factor(f)) {
            if (!g.is_monic() || !irreducible_by_search(g)) ++fact_bad;
            for (int i = 0; i < m; ++i) prod = prod * g;
        }
        if (!(prod == f)) ++fact_bad;
    }
    o.require(fact_bad == 0, std::to_string(fact_bad) + " bad factorizations");

    std::vector<ff::Field> fields{ff::Field(2, 3), ff::Field(2, 4), ff::Field(3, 2), ff::Field(5, 3), ff::Field(7, 2)};
    int frob_bad = 0;
    for (int s = 0; s < 10000; ++s) {
        const auto& F = fields[s % fields.size()];
        ff::FieldElement a{static_cast<std::uint32_t>(prng() % F.order())};
        ff::FieldElement b{static_cast<std::uint32_t>(prng() % F.order())};
        frob_bad += F.frobenius(F.add(a, b)) != F.add(F.frobenius(a), F.frobenius(b));
        frob_bad += F.frobenius(F.mul(a, b)) != F.mul(F.frobenius(a), F.frobenius(b));
    }
    o.require(frob_bad == 0, std::to_string(frob_bad) + " Frobenius failures");
    o.note << (o.pass ? "" : " ")
           << "100 random complexes, 1000 factorizations over GF(2), GF(3), GF(5), 10^4 Frobenius samples";
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
        {"block idempotents equal the brute-force oracle", criterion1},
        {"S7 nonprincipal 2-block has dihedral defect group of order 8", criterion2},
        {"S7 nonprincipal block is of principal type", criterion3},
        {"Theorem 1 suite on every corpus block", criterion4},
        {"homology of the two order complexes agrees", criterion5},
        {"S4 principal K(b) is the face poset of the clique complex", criterion6},
        {"non-clique obstruction on the S7 block, none on principal blocks", criterion7},
        {"Theorem 2 suite on every corpus block", criterion8},
        {"SNF, boundary, factorization and Frobenius oracles", criterion9},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        auto start = Clock::now();
        try {
            criteria[i].second(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        failed += !o.pass;
        std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << " - " << criteria[i].first << " ["
                  << o.note.str() << "] (" << fmt(seconds_since(start)) << ")" << std::endl;
    }
    std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << std::endl;
    return failed ? 1 : 0;
}
