#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <thread>

#include "commcat/harness.hpp"
#include "doctest.h"

using namespace commcat;
using namespace commcat::harness;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("commcat-test-" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

Target target(const std::string& g, std::uint32_t p, std::string block = "all") {
    return Target{GroupSpec::parse(g), p, 1, std::move(block), false};
}

std::vector<std::vector<std::uint32_t>> codes(const std::vector<alg::Block>& bs) {
    std::vector<std::vector<std::uint32_t>> out;
    for (const auto& b : bs) {
        out.emplace_back();
        for (auto c : b.class_coords) out.back().push_back(c.code());
    }
    return out;
}

const json* find_check(const json& doc, const std::string& name, std::size_t block) {
    for (const auto& c : doc["checks"])
        if (c["name"] == name && c["target"]["block"] == block) return &c;
    return nullptr;
}

}  // namespace

TEST_CASE("group specs: presets and JSON forms share a canonical form") {
    CHECK(GroupSpec::parse("S4").canonical == GroupSpec::parse(R"({"type":"symmetric","n":4})").canonical);
    CHECK(GroupSpec::parse(" d8 ").canonical == GroupSpec::parse(R"({"type":"dihedral","order":8})").canonical);
    CHECK(GroupSpec::parse("S7").label == "S7");

    auto a = GroupSpec::parse(R"({"type":"generators","degree":4,"gens":[[[1,2]],[[1,2,3,4]]]})");
    auto b = GroupSpec::parse(R"x({"type":"generators","degree":4,"gens":["(1,2)","(1 2 3 4)"]})x");
    auto c = GroupSpec::parse(R"({"type":"generators","degree":4,"gens":[[1,2],[1,2,3,4]]})");
    CHECK(a.canonical == b.canonical);
    CHECK(a.canonical == c.canonical);
    CHECK(a.build().order() == 24);
    CHECK(GroupSpec::parse("D10").build().order() == 10);

    for (const char* bad : {"Q8", "D7", "D2", "S0", "{", R"({"type":"alternating","n":4})",
                            R"({"type":"generators","degree":3,"gens":[[[1,4]]]})",
                            R"({"type":"generators","degree":3,"gens":[[[1,2],[2,3]]]})",
                            R"({"type":"symmetric"})"})
        CHECK_THROWS_AS(GroupSpec::parse(bad), SpecError);
}

TEST_CASE("cycle strings") {
    CHECK(parse_cycles(4, "(1 2)(3 4)") == parse_cycles(4, "(1,2)(3,4)"));
    CHECK(parse_cycles(4, "()").is_identity());
    CHECK(parse_cycles(4, "(1 2 3)").to_string() == "(1 2 3)");
    CHECK_THROWS_AS(parse_cycles(3, "(1 2"), SpecError);
    CHECK_THROWS_AS(parse_cycles(3, "(1 x)"), SpecError);
}

TEST_CASE("sha256 matches the standard test vectors") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("cache keys depend on spec, prime, degree and version") {
    auto s4 = GroupSpec::parse("S4");
    auto k = BlockCache::key(s4, 2, 1);
    CHECK(k == sha256_hex(s4.canonical.dump() + "|2|1|" + kVersion));
    CHECK(k != BlockCache::key(s4, 3, 1));
    CHECK(k != BlockCache::key(s4, 2, 2));
    CHECK(k != BlockCache::key(GroupSpec::parse("S5"), 2, 1));
}

TEST_CASE("cache round trip, corruption and forged entries") {
    TempDir dir;
    Options opt;
    opt.cache_dir = dir.path;
    auto t = target("S5", 2);
    auto fresh = open_session(t, Options{});
    auto cold = open_session(t, opt);
    BlockCache cache(dir.path);
    auto key = BlockCache::key(t.group, 2, 1);
    REQUIRE(fs::exists(cache.path_for(key)));
    auto loaded = cache.load(t.group, 2, 1);
    REQUIRE(loaded);
    CHECK(loaded->size() == 2);
    auto warm = open_session(t, opt);
    CHECK(codes(warm->blocks()) == codes(fresh->blocks()));
    CHECK(codes(cold->blocks()) == codes(fresh->blocks()));

    SUBCASE("flipped byte fails the checksum and is recomputed") {
        std::string text;
        {
            std::ifstream in(cache.path_for(key));
            text.assign(std::istreambuf_iterator<char>(in), {});
        }
        auto pos = text.find("\"blocks\"");
        REQUIRE(pos != std::string::npos);
        pos = text.find_first_of("01", pos);
        text[pos] = text[pos] == '0' ? '1' : '0';
        std::ofstream(cache.path_for(key), std::ios::trunc) << text;
        CHECK_FALSE(cache.load(t.group, 2, 1));
        auto again = open_session(t, opt);
        CHECK(codes(again->blocks()) == codes(fresh->blocks()));
        CHECK(cache.load(t.group, 2, 1));
    }
    SUBCASE("valid checksum over wrong data is rejected by the algebra") {
        json j{{"version", kVersion}, {"group", t.group.canonical}, {"prime", 2}, {"field_degree", 1}};
        auto bad = codes(fresh->blocks());
        bad[0][0] ^= 1u;
        j["blocks"] = bad;
        j["checksum"] = sha256_hex(j.dump());
        std::ofstream(cache.path_for(key), std::ios::trunc) << j.dump();
        CHECK(cache.load(t.group, 2, 1));
        auto again = open_session(t, opt);
        CHECK(codes(again->blocks()) == codes(fresh->blocks()));
    }
    SUBCASE("a coarser decomposition with a valid checksum is rejected") {
        json j{{"version", kVersion}, {"group", t.group.canonical}, {"prime", 2}, {"field_degree", 1}};
        auto all = codes(fresh->blocks());
        std::vector<std::uint32_t> one(all[0].size(), 0);
        for (const auto& row : all)
            for (std::size_t i = 0; i < row.size(); ++i) one[i] ^= row[i];
        j["blocks"] = std::vector<std::vector<std::uint32_t>>{one};
        j["checksum"] = sha256_hex(j.dump());
        std::ofstream(cache.path_for(key), std::ios::trunc) << j.dump();
        CHECK(cache.load(t.group, 2, 1));
        auto again = open_session(t, opt);
        CHECK(again->blocks().size() == 2);
        CHECK(codes(again->blocks()) == codes(fresh->blocks()));
    }
    SUBCASE("garbage") {
        std::ofstream(cache.path_for(key), std::ios::trunc) << "not json";
        CHECK_FALSE(cache.load(t.group, 2, 1));
        CHECK(codes(open_session(t, opt)->blocks()) == codes(fresh->blocks()));
    }
}

TEST_CASE("concurrent cache writes leave one readable entry") {
    TempDir dir;
    auto t = target("S4", 2);
    auto s = open_session(t, Options{});
    BlockCache cache(dir.path);
    std::vector<std::thread> pool;
    for (int i = 0; i < 8; ++i) pool.emplace_back([&] { cache.store(t.group, 2, 1, s->blocks()); });
    for (auto& th : pool) th.join();
    std::size_t files = 0;
    for (auto& e : fs::directory_iterator(dir.path)) files += e.is_regular_file();
    CHECK(files == 1);
    CHECK(cache.load(t.group, 2, 1));
}

TEST_CASE("block listings") {
    auto s4 = blocks_listing(target("S4", 2), Options{});
    CHECK(s4["block_count"] == 1);
    CHECK(s4["blocks"][0]["principal"] == true);
    CHECK(s4["blocks"][0]["defect"]["order"] == 8);

    auto s3 = blocks_listing(target("S3", 2), Options{});
    CHECK(s3["block_count"] == 2);
    CHECK(s3["blocks"][0]["defect"]["order"] == 2);
    CHECK(s3["blocks"][1]["defect"]["order"] == 1);
    CHECK(s3["blocks"][1]["augmentation"] == "0");
    CHECK(blocks_text(s3).find("2 blocks") != std::string::npos);

    auto s7 = blocks_listing(target("S7", 2), Options{});
    CHECK(s7["block_count"] == 2);
    const auto& d = s7["blocks"][1]["defect"];
    CHECK(d["order"] == 8);
    CHECK(d["fingerprint"]["dihedral_8"] == true);
    CHECK(d["fingerprint"]["abelian"] == false);
    CHECK(d["fingerprint"]["exponent"] == 4);
}

TEST_CASE("verify: examples and report determinism") {
    std::vector<Target> ts{target("S3", 2), target("S4", 2), target("D8", 2), target("S3", 3)};
    Options opt;
    auto r1 = run_verify(ts, kAllChecks, opt);
    auto r2 = run_verify(ts, kAllChecks, opt);
    opt.jobs = 3;
    auto r3 = run_verify(ts, kAllChecks, opt);
    CHECK(r1.doc.dump() == r2.doc.dump());
    CHECK(r1.doc.dump() == r3.doc.dump());
    CHECK(r1.exit_code() == 0);
    CHECK(r1.doc["version"] == kVersion);

    const json* t1 = find_check(r1.doc, "theorem1", 0);
    REQUIRE(t1);
    CHECK((*t1)["status"] == "pass");
    CHECK((*t1)["details"]["a_size"] == 3);
    CHECK((*t1)["details"]["k_size"] == 3);
    const json* h = find_check(r1.doc, "homology", 0);
    REQUIRE(h);
    CHECK((*h)["details"]["homology_a"] == "H0=Z^3");

    const json* t2 = find_check(r1.doc, "theorem2", 1);
    REQUIRE(t2);
    CHECK((*t2)["target"]["group"] == "S3");
    CHECK((*t2)["status"] == "pass");
    CHECK((*t2)["details"]["class_count"] == 0);

    for (const auto& c : r1.doc["checks"]) CHECK_FALSE(c.contains("seconds"));
}

TEST_CASE("verify: bounds give skips, never silent passes") {
    Options opt;
    opt.max_simplices = 2;
    auto r = run_verify({target("S4", 2)}, {"homology"}, opt);
    CHECK(r.doc["checks"][0]["status"] == "skipped");
    CHECK(!r.doc["checks"][0]["reason"].get<std::string>().empty());
    CHECK(r.exit_code() == 2);

    Options small;
    small.max_elements = 100;
    auto big = run_verify({target("S6", 2)}, {"theorem1", "theorem2"}, small);
    CHECK(big.doc["summary"]["skipped"] == 2);
    CHECK(big.exit_code() == 2);

    Options tiny;
    tiny.max_poset_elements = 3;
    auto k = run_verify({target("S4", 2)}, {"theorem1"}, tiny);
    CHECK(k.doc["checks"][0]["status"] == "skipped");
}

TEST_CASE("exit codes follow the summary") {
    Report r;
    r.doc = {{"summary", {{"pass", 3}, {"fail", 0}, {"skipped", 0}}}};
    CHECK(r.exit_code() == 0);
    r.doc["summary"]["skipped"] = 1;
    CHECK(r.exit_code() == 2);
    r.doc["summary"]["fail"] = 1;
    CHECK(r.exit_code() == 1);
}

TEST_CASE("verify rejects bad selectors and checks") {
    CHECK_THROWS_AS(run_verify({target("S3", 2, "5")}, {"theorem1"}, Options{}), SpecError);
    CHECK_THROWS_AS(run_verify({target("S3", 2, "odd")}, {"theorem1"}, Options{}), SpecError);
    CHECK_THROWS_AS(run_verify({target("S3", 2)}, {"theorem3"}, Options{}), SpecError);
    CHECK_THROWS_AS(run_verify({target("S3", 4)}, {"theorem1"}, Options{}), SpecError);
}

TEST_CASE("corpus") {
    auto c = default_corpus(false);
    CHECK(c.size() == 5);
    auto slow = default_corpus(true);
    REQUIRE(slow.size() == 6);
    CHECK(slow.back().slow);
    CHECK(slow.back().group.label == "S7");
    CHECK(slow.back().block == "1");
    // Every selector resolves.
    for (const auto& t : slow) CHECK_FALSE(open_session(t, Options{})->selected_blocks().empty());
}

TEST_CASE("dihedral search") {
    auto hit = find_dihedral_block(6, 8, Options{});
    REQUIRE(hit);
    CHECK(hit->n == 7);
    CHECK(hit->defect["order"] == 8);
    CHECK_FALSE(find_dihedral_block(3, 4, Options{}));
    CHECK_FALSE(find_dihedral_block(5, 4, Options{}));
    CHECK(dihedral_json(3, 4, std::nullopt)["found"] == false);
}

TEST_CASE("poset export") {
    SUBCASE("K of S3 principal: three points") {
        auto x = export_poset(target("S3", 2, "principal"), "K", Options{});
        auto j = poset_json(x);
        CHECK(j["elements"].size() == 3);
        CHECK(j["covering"].empty());
        CHECK(j["leq"].size() == 3);
        CHECK(j["empty"] == false);
        auto dot = poset_dot(x);
        CHECK(dot.find("->") == std::string::npos);
        CHECK(dot.find("n2 [") != std::string::npos);
    }
    SUBCASE("A of a defect-zero block is empty") {
        auto j = poset_json(export_poset(target("S3", 2, "1"), "A", Options{}));
        CHECK(j["empty"] == true);
        CHECK(j["elements"].empty());
    }
    SUBCASE("brauer pairs over the V-subgroups of the S7 block") {
        std::vector<std::vector<std::string>> fam{{"(1 2)", "(3 4)"}, {"(1 2)", "(5 6)"}, {"(3 4)", "(5 6)"}};
        auto x = export_poset(target("S7", 2, "1"), "brauer-pairs", Options{}, fam);
        auto j = poset_json(x);
        REQUIRE(j["elements"].size() == 7);
        CHECK(j["covering"].size() == 9);
        CHECK(j["elements"][0]["orbit"].is_null());
        std::map<std::size_t, int> up, down;
        for (const auto& e : j["covering"]) {
            up[e[0].get<std::size_t>()]++;
            down[e[1].get<std::size_t>()]++;
        }
        std::size_t minimal = 0, maximal = 0;
        for (std::size_t i = 0; i < 7; ++i) {
            minimal += down[i] == 0;
            maximal += up[i] == 0;
        }
        CHECK(minimal == 1);
        CHECK(maximal == 3);
    }
    SUBCASE("leq is the reflexive transitive closure of covering") {
        for (const char* which : {"A", "K", "K-orbit", "brauer-pairs", "iso-classes"}) {
            auto j = poset_json(export_poset(target("S4", 2, "principal"), which, Options{}));
            std::size_t n = j["elements"].size();
            std::vector<std::vector<char>> r(n, std::vector<char>(n, 0));
            for (std::size_t i = 0; i < n; ++i) r[i][i] = 1;
            for (const auto& e : j["covering"]) r[e[0].get<std::size_t>()][e[1].get<std::size_t>()] = 1;
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t i = 0; i < n; ++i)
                    if (r[i][k])
                        for (std::size_t l = 0; l < n; ++l)
                            if (r[k][l]) r[i][l] = 1;
            std::set<std::pair<std::size_t, std::size_t>> closure, leq;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t l = 0; l < n; ++l)
                    if (r[i][l]) closure.insert({i, l});
            for (const auto& e : j["leq"]) leq.insert({e[0].get<std::size_t>(), e[1].get<std::size_t>()});
            CHECK_MESSAGE(closure == leq, which);
        }
    }
    SUBCASE("K and K-orbit agree on orbit counts") {
        auto K = poset_json(export_poset(target("S4", 2), "K", Options{}));
        auto O = poset_json(export_poset(target("S4", 2), "K-orbit", Options{}));
        std::set<std::size_t> orbits;
        for (const auto& e : K["elements"]) orbits.insert(e["orbit"].get<std::size_t>());
        CHECK(orbits.size() == O["elements"].size());
    }
    CHECK_THROWS_AS(export_poset(target("S3", 2, "all"), "K", Options{}), SpecError);
    CHECK_THROWS_AS(export_poset(target("S3", 2, "0"), "L", Options{}), SpecError);
}
