#include <algorithm>
#include <set>

#include "commcat/fusion.hpp"
#include "doctest.h"

using namespace commcat;
using namespace commcat::fusion;
using alg::Block;
using ff::Field;
using perm::Permutation;

namespace {

Index elt(const PermGroup& G, const std::vector<std::vector<std::uint32_t>>& cycles) {
    return G.index_of(Permutation::from_cycles(G.degree(), cycles));
}

Subgroup gen(const PermGroup& G, const std::vector<std::vector<std::vector<std::uint32_t>>>& gens) {
    std::vector<Index> idx;
    for (const auto& c : gens) idx.push_back(elt(G, c));
    return perm::generated_subgroup(G, idx);
}

}  // namespace

TEST_CASE("maximal Brauer pairs") {
    auto G = PermGroup::symmetric(3);
    Field F(2);
    brauer::LocalStructure L(G, F);
    auto top0 = max_brauer_pair(L, L.blocks()[0]);
    CHECK(top0.Q.order() == 2);
    CHECK(top0.e == alg::GroupAlgebraElement::unit(F));
    auto top1 = max_brauer_pair(L, L.blocks()[1]);
    CHECK(top1.Q.is_trivial());
    CHECK(top1.e == L.blocks()[1].idempotent);
}

TEST_CASE("hom sets of the S3 and S4 principal blocks") {
    {
        auto G = PermGroup::symmetric(3);
        Field F(2);
        brauer::LocalStructure L(G, F);
        FusionSystem FS(L, L.blocks()[0]);
        const auto& P = FS.defect_group();
        CHECK(FS.hom(P, P).size() == 1);
    }
    auto G = PermGroup::symmetric(4);
    Field F(2);
    brauer::LocalStructure L(G, F);
    FusionSystem FS(L, L.blocks()[0]);
    const auto& P = FS.defect_group();
    REQUIRE(P.order() == 8);
    for (const auto& Q : FS.objects()) {
        // identity is present
        const auto& endo = FS.hom(Q, Q);
        Morphism id{Q.generators(), 0};
        CHECK(std::binary_search(endo.begin(), endo.end(), id));
    }
    for (const auto& Q : FS.objects()) {
        if (Q.order() != 2) continue;
        // Principal block: every conjugation into P is allowed, so count distinct images.
        std::set<Index> images;
        for (Index g = 0; g < G.order(); ++g) {
            Index x = G.conj(Q.generators().front(), g);
            if (P.contains(x)) images.insert(x);
        }
        CHECK(FS.hom(Q, P).size() == images.size());
    }
    // inner fusion and composition closure
    for (const auto& Q : FS.objects())
        for (const auto& R : FS.objects()) {
            const auto& QR = FS.hom(Q, R);
            for (Index n : P.members()) {
                bool into = true;
                for (Index q : Q.generators()) into = into && R.contains(G.conj(q, n));
                if (!into) continue;
                Morphism m;
                for (Index q : Q.generators()) m.images.push_back(G.conj(q, n));
                CHECK(std::binary_search(QR.begin(), QR.end(), m));
            }
            for (const auto& S : FS.objects()) {
                const auto& RS = FS.hom(R, S);
                const auto& QS = FS.hom(Q, S);
                for (const auto& a : QR)
                    for (const auto& c : RS) CHECK(std::binary_search(QS.begin(), QS.end(), FS.compose(Q, a, c)));
            }
        }
}

TEST_CASE("commuting categories on small defect groups") {
    {
        auto G = PermGroup::symmetric(3);
        Field F(2);
        brauer::LocalStructure L(G, F);
        FusionSystem FS(L, L.blocks()[0]);
        auto C = commuting_category(FS, 2);
        CHECK(C.objects.size() == 1);
        CHECK(C.homs[0][0].size() == 1);
        auto I = iso_class_poset(FS, C);
        CHECK(I.poset.size() == 1);
    }
    {
        auto V = PermGroup::from_generators(4, {Permutation::from_cycles(4, {{1, 2}, {3, 4}}),
                                                Permutation::from_cycles(4, {{1, 3}, {2, 4}})});
        Field F(2);
        brauer::LocalStructure L(V, F);
        REQUIRE(L.blocks().size() == 1);
        FusionSystem FS(L, L.blocks()[0]);
        auto C = commuting_category(FS, 2);
        CHECK(C.objects.size() == 7);
        auto I = iso_class_poset(FS, C);
        CHECK(I.poset.size() == 7);
        for (Element a = 0; a < 7; ++a)
            for (Element b = 0; b < 7; ++b) {
                const auto& ka = C.objects[I.classes[a].front()];
                const auto& kb = C.objects[I.classes[b].front()];
                CHECK(I.poset.leq(a, b) == std::includes(kb.begin(), kb.end(), ka.begin(), ka.end()));
            }
    }
    {
        auto G = PermGroup::symmetric(7);
        Field F(2);
        brauer::LocalStructure L(G, F);
        FusionSystem FS(L, L.blocks()[1]);
        CHECK(FS.defect_group().order() == 8);
        auto C = commuting_category(FS, 2);
        for (const auto& kappa : C.objects) CHECK(kappa.size() <= 3);
        CHECK(C.objects.size() == 13);
    }
}

TEST_CASE("Theorem 2 on corpus blocks") {
    struct Case {
        PermGroup G;
        std::uint32_t p;
    };
    std::vector<Case> cases;
    cases.push_back({PermGroup::symmetric(3), 2});
    cases.push_back({PermGroup::symmetric(3), 3});
    cases.push_back({PermGroup::symmetric(4), 2});
    cases.push_back({PermGroup::symmetric(5), 2});
    cases.push_back({PermGroup::dihedral(8), 2});
    cases.push_back({PermGroup::symmetric(7), 2});
    for (auto& c : cases) {
        Field F(c.p);
        brauer::LocalStructure L(c.G, F);
        for (const auto& b : L.blocks()) {
            auto A = commuting::build_A(L, b);
            auto K = commuting::build_K(L, b, A);
            auto r = theorem2_check(L, b, K);
            CHECK_MESSAGE(r.pass(), c.G.label() << " p=" << c.p << " block principal=" << b.principal);
            for (const auto& w : r.witnesses) MESSAGE(w);
            if (c.G.order() == 3 * 2 && c.p == 2 && b.principal) CHECK(r.class_count == 1);
            if (c.G.order() == 5040 && !b.principal) {
                CHECK(K.elements.size() == 686);
                CHECK(r.orbit_count == 7);
            }
        }
    }
}
