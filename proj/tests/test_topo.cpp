#include <doctest.h>

#include <random>

#include <boost/multiprecision/cpp_int.hpp>

#include "commcat/topo.hpp"

using namespace commcat::topo;
using boost::multiprecision::cpp_rational;

namespace {

Poset chain(std::size_t n) {
    std::vector<std::pair<Element, Element>> rel;
    for (Element i = 0; i + 1 < n; ++i) rel.emplace_back(i, i + 1);
    return Poset::from_relation(n, rel);
}

Poset antichain(std::size_t n) { return Poset::from_relation(n, {}); }

// Rank over Q by fraction-exact Gaussian elimination.
std::size_t rational_rank(const SparseIntMatrix& m) {
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

cpp_rational determinant(const DenseIntMatrix& m) {
    const std::size_t n = m.rows;
    std::vector<std::vector<cpp_rational>> a(n, std::vector<cpp_rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = cpp_rational(m.at(i, j));
    cpp_rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            cpp_rational f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return det;
}

void check_smith(const DenseIntMatrix& M) {
    SmithForm s = smith_normal_form(M);
    DenseIntMatrix D = s.U * M * s.V;
    for (std::size_t i = 0; i < D.rows; ++i)
        for (std::size_t j = 0; j < D.cols; ++j) {
            if (i == j) {
                CHECK(D.at(i, j) == s.diagonal[i]);
            } else {
                CHECK(D.at(i, j) == 0);
            }
        }
    for (std::size_t i = 0; i < s.diagonal.size(); ++i) {
        CHECK(s.diagonal[i] >= 0);
        if (i + 1 < s.diagonal.size() && s.diagonal[i] != 0) CHECK(s.diagonal[i + 1] % s.diagonal[i] == 0);
        if (i + 1 < s.diagonal.size() && s.diagonal[i] == 0) CHECK(s.diagonal[i + 1] == 0);
    }
    CHECK(abs(determinant(s.U)) == 1);
    CHECK(abs(determinant(s.V)) == 1);
}

SimplicialComplex boundary_of_simplex(std::size_t n) {
    std::vector<Simplex> faces;
    for (Element skip = 0; skip < n; ++skip) {
        Simplex s;
        for (Element v = 0; v < n; ++v)
            if (v != skip) s.push_back(v);
        faces.push_back(s);
    }
    return SimplicialComplex::from_faces(n, faces);
}

}  // namespace

TEST_CASE("poset construction and queries") {
    Poset c = chain(3);
    CHECK(c.leq(0, 2));
    CHECK_FALSE(c.leq(2, 0));
    CHECK(c.relation().size() == 3);
    CHECK(c.covering() == std::vector<std::pair<Element, Element>>{{0, 1}, {1, 2}});
    CHECK(c.minimal_elements() == std::vector<Element>{0});
    CHECK(c.maximal_elements() == std::vector<Element>{2});
    CHECK_THROWS_AS(Poset::from_relation(2, {{0, 1}, {1, 0}}), PosetError);
    CHECK_THROWS_AS(Poset::from_predicate(2, [](Element a, Element b) { return a == b || a == 0 || b == 0; }),
                    PosetError);
    // divisibility on 1..12
    Poset div = Poset::from_predicate(12, [](Element a, Element b) { return (b + 1) % (a + 1) == 0; });
    CHECK(div.above(0).size() == 11);
    CHECK(div.maximal_elements() == std::vector<Element>{6, 7, 8, 9, 10, 11});
}

TEST_CASE("orbit poset") {
    // Boolean lattice on {0,1} minus the empty set, swap action.
    Poset b = Poset::from_relation(3, {{0, 2}, {1, 2}});
    GPoset X(b, {{1, 0, 2}});
    CHECK(X.check_action().empty());
    OrbitPoset o = orbit_poset(X);
    CHECK(o.poset.size() == 2);
    CHECK(o.poset.less(o.orbit_of[0], o.orbit_of[2]));

    GPoset trivial(chain(3), {{0, 1, 2}});
    CHECK(orbit_poset(trivial).poset.relation() == chain(3).relation());

    GPoset bad(chain(2), {{1, 0}});
    CHECK_FALSE(bad.check_action().empty());
    CHECK_THROWS_AS(orbit_poset(bad), PosetError);
}

TEST_CASE("order complex examples") {
    SimplicialComplex k = order_complex(chain(3));
    CHECK(k.dimension() == 2);
    CHECK(k.face_count() == 7);
    SimplicialComplex a = order_complex(antichain(4));
    CHECK(a.dimension() == 0);
    CHECK(a.face_count() == 4);
    CHECK(order_complex(Poset{}).dimension() == -1);
    CHECK_THROWS_AS(order_complex(chain(12), 100), SimplexBoundExceeded);

    // A poset with a maximum gives a cone: homology of a point.
    Poset cone = Poset::from_relation(5, {{0, 2}, {1, 2}, {0, 3}, {1, 3}, {2, 4}, {3, 4}});
    HomologyResult h = homology(order_complex(cone));
    CHECK(h.groups[0].betti == 1);
    for (std::size_t d = 1; d < h.groups.size(); ++d) CHECK(h.groups[d] == HomologyGroup{});
    // Same poset without the maximum is a circle.
    Poset circle = Poset::from_relation(4, {{0, 2}, {1, 2}, {0, 3}, {1, 3}});
    HomologyResult hc = homology(order_complex(circle));
    CHECK(hc.groups[1].betti == 1);
}

TEST_CASE("clique and face posets") {
    // 4-cycle plus a chord
    std::vector<std::vector<Element>> adj{{1, 3, 2}, {0, 2}, {1, 3, 0}, {2, 0}};
    SimplicialComplex k = clique_complex(adj);
    CHECK(k.faces(0).size() == 4);
    CHECK(k.faces(1).size() == 5);
    CHECK(k.faces(2).size() == 2);
    std::vector<Simplex> faces;
    Poset fp = face_poset(k, &faces);
    CHECK(fp.size() == 11);
    CHECK(faces.size() == 11);
    // the order complex of the face poset is the barycentric subdivision
    CHECK(homology(order_complex(fp)) == homology(k));
}

TEST_CASE("homology examples") {
    HomologyResult point = homology(SimplicialComplex::from_faces(1, {{0}}));
    REQUIRE(point.groups.size() == 1);
    CHECK(point.groups[0].betti == 1);

    HomologyResult circle = homology(boundary_of_simplex(3));
    REQUIRE(circle.groups.size() == 2);
    CHECK(circle.groups[0].betti == 1);
    CHECK(circle.groups[1].betti == 1);

    HomologyResult sphere = homology(boundary_of_simplex(4));
    REQUIRE(sphere.groups.size() == 3);
    CHECK(sphere.groups[0].betti == 1);
    CHECK(sphere.groups[1] == HomologyGroup{});
    CHECK(sphere.groups[2].betti == 1);
    CHECK(sphere.describe() == "H0=Z, H1=0, H2=Z");

    CHECK(homology(SimplicialComplex{}).empty_complex());
    CHECK(homology(SimplicialComplex{}).describe() == "empty complex");

    // Six-vertex triangulation of the real projective plane: H1 = Z/2.
    std::vector<Simplex> rp2{{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 5, 1},
                             {1, 2, 4}, {2, 3, 5}, {3, 4, 1}, {4, 5, 2}, {5, 1, 3}};
    HomologyResult h = homology(SimplicialComplex::from_faces(6, rp2));
    REQUIRE(h.groups.size() == 3);
    CHECK(h.groups[0].betti == 1);
    CHECK(h.groups[1].betti == 0);
    REQUIRE(h.groups[1].torsion.size() == 1);
    CHECK(h.groups[1].torsion[0] == 2);
    CHECK(h.groups[2] == HomologyGroup{});
    CHECK(h.euler_characteristic() == 1);
}

TEST_CASE("smith normal form examples") {
    DenseIntMatrix m(2, 2);
    m.at(0, 0) = 2;
    m.at(1, 1) = 3;
    SmithForm s = smith_normal_form(m);
    CHECK(s.diagonal == std::vector<BigInt>{1, 6});
    check_smith(m);

    SmithForm id = smith_normal_form(DenseIntMatrix::identity(3));
    CHECK(id.diagonal == std::vector<BigInt>{1, 1, 1});

    SmithForm zero = smith_normal_form(DenseIntMatrix(2, 3));
    CHECK(zero.diagonal == std::vector<BigInt>{0, 0});

    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<int> val(-9, 9), dim(1, 6);
    for (int trial = 0; trial < 200; ++trial) {
        DenseIntMatrix r(dim(rng), dim(rng));
        for (auto& x : r.a) x = val(rng);
        check_smith(r);
    }
}

TEST_CASE("checked arithmetic widens on overflow") {
    const std::int64_t big = std::numeric_limits<std::int64_t>::max() / 2;
    SparseIntMatrix m;
    m.rows = 2;
    m.cols = 2;
    m.columns = {{{0, 3}, {1, big}}, {{0, big - 1}, {1, big + 5}}};
    std::vector<BigInt> f = invariant_factors(m);
    DenseIntMatrix d = DenseIntMatrix::from_sparse(m);
    std::vector<BigInt> expect;
    for (const auto& x : smith_normal_form(d).diagonal)
        if (x != 0) expect.push_back(x);
    CHECK(f == expect);
}

TEST_CASE("random complexes: SNF betti numbers match rational ranks") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 1 + rng() % 8;
        std::vector<Simplex> faces;
        std::size_t count = 1 + rng() % 10;
        for (std::size_t i = 0; i < count; ++i) {
            Simplex s;
            for (Element v = 0; v < n; ++v)
                if (rng() % 2) s.push_back(v);
            if (!s.empty()) faces.push_back(s);
        }
        SimplicialComplex k = SimplicialComplex::from_faces(n, faces);
        HomologyResult h = homology(k);
        auto bd = boundary_matrices(k);
        std::vector<std::size_t> rank(static_cast<std::size_t>(k.dimension()) + 2, 0);
        for (int d = 1; d <= k.dimension(); ++d) rank[d] = rational_rank(bd[d - 1]);
        for (int d = 0; d <= k.dimension(); ++d)
            CHECK(h.groups[d].betti == k.faces(d).size() - rank[d] - rank[d + 1]);
        CHECK(h.euler_characteristic() == k.euler_characteristic());

        // relabel vertices by a random permutation
        std::vector<Element> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<Simplex> moved;
        for (auto s : faces) {
            for (auto& v : s) v = perm[v];
            moved.push_back(s);
        }
        std::shuffle(moved.begin(), moved.end(), rng);
        CHECK(homology(SimplicialComplex::from_faces(n, moved)) == h);
    }
}

TEST_CASE("quillen pair certificate") {
    Poset c = chain(2);
    GPoset X(c, {});
    std::vector<Element> id{0, 1};
    QuillenCertificate ok = quillen_pair_check(X, X, id, id);
    CHECK(ok.pass());
    CHECK(ok.source_direction == 2);

    GPoset A(antichain(2), {});
    std::vector<Element> swap{1, 0};
    QuillenCertificate bad = quillen_pair_check(X, A, swap, swap);
    CHECK_FALSE(bad.pass());
    CHECK_FALSE(bad.forward_order_preserving);
    CHECK_FALSE(bad.witnesses.empty());

    // Retraction of a chain onto its top element.
    GPoset point(Poset::from_relation(1, {}), {});
    std::vector<Element> F{0, 0}, H{1};
    QuillenCertificate r = quillen_pair_check(X, point, F, H);
    CHECK(r.pass());
    CHECK(r.source_direction == 1);
    CHECK(r.target_direction == 2);

    // Equivariance is checked per generator.
    GPoset sym(antichain(2), {{1, 0}});
    GPoset fixed(Poset::from_relation(2, {}), {{0, 1}});
    QuillenCertificate neq = quillen_pair_check(sym, fixed, id, id);
    CHECK_FALSE(neq.forward_equivariant);
}

TEST_CASE("poset isomorphism check") {
    std::vector<Element> id{0, 1};
    CHECK(poset_iso_check(chain(2), chain(2), id).pass);
    std::vector<Element> sw{1, 0};
    CHECK_FALSE(poset_iso_check(chain(2), antichain(2), id).pass);
    CHECK_FALSE(poset_iso_check(chain(2), antichain(2), sw).pass);
    CHECK_FALSE(poset_iso_check(antichain(2), chain(2), id).pass);
    CHECK_FALSE(poset_iso_check(chain(2), chain(2), sw).pass);
    std::vector<Element> notbij{0, 0};
    CHECK_FALSE(poset_iso_check(antichain(2), antichain(2), notbij).pass);
}

TEST_CASE("dot export lists covering edges") {
    std::string dot = to_dot(chain(3), "c");
    CHECK(dot.find("n0 -> n1") != std::string::npos);
    CHECK(dot.find("n0 -> n2") == std::string::npos);
    std::vector<Element> orbit{0, 0, 1};
    CHECK(to_dot(chain(3), "c", &orbit).find("fillcolor") != std::string::npos);
}
