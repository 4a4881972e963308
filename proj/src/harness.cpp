#include "commcat/harness.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cctype>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

namespace commcat::harness {

using perm::Index;
using perm::Permutation;
using perm::PermGroup;
using perm::Subgroup;
using topo::Element;

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::vector<std::uint32_t>> cycles_of(const Permutation& g) {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<char> seen(g.degree(), 0);
    for (std::size_t i = 0; i < g.degree(); ++i) {
        if (seen[i] || g[i] == i) continue;
        std::vector<std::uint32_t> cyc;
        for (std::size_t j = i; !seen[j]; j = g[j]) {
            seen[j] = 1;
            cyc.push_back(static_cast<std::uint32_t>(j + 1));
        }
        out.push_back(std::move(cyc));
    }
    return out;
}

Permutation checked_cycles(std::size_t degree, const std::vector<std::vector<std::uint32_t>>& cycles) {
    std::vector<char> used(degree + 1, 0);
    for (const auto& c : cycles)
        for (auto x : c) {
            if (x < 1 || x > degree)
                throw SpecError("point " + std::to_string(x) + " outside 1.." + std::to_string(degree));
            if (used[x]) throw SpecError("point " + std::to_string(x) + " repeated in cycle notation");
            used[x] = 1;
        }
    return Permutation::from_cycles(degree, cycles);
}

Permutation generator_from_json(std::size_t degree, const json& g) {
    if (g.is_string()) return parse_cycles(degree, g.get<std::string>());
    if (!g.is_array()) throw SpecError("generator must be a cycle string or a list of cycles");
    std::vector<std::vector<std::uint32_t>> cycles;
    if (!g.empty() && g.front().is_number_integer()) {
        cycles.push_back(g.get<std::vector<std::uint32_t>>());
    } else {
        for (const auto& c : g) {
            if (!c.is_array()) throw SpecError("cycle must be a list of points");
            for (const auto& x : c)
                if (!x.is_number_integer() || x.get<long long>() < 1) throw SpecError("cycle points must be positive integers");
            cycles.push_back(c.get<std::vector<std::uint32_t>>());
        }
    }
    return checked_cycles(degree, cycles);
}

std::size_t positive_field(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<long long>() < 1)
        throw SpecError(std::string("group spec needs a positive integer \"") + key + "\"");
    return j[key].get<std::size_t>();
}

json cycles_json(const Permutation& g) { return json(cycles_of(g)); }

json generators_json(const PermGroup& G, const Subgroup& Q) {
    json out = json::array();
    for (Index x : Q.generators()) out.push_back(G.element(x).to_string());
    return out;
}

json fingerprint_json(const perm::Fingerprint& f) {
    return {{"order", f.order},
            {"exponent", f.exponent},
            {"abelian", f.abelian},
            {"cyclic", f.cyclic},
            {"order_p_elements", f.order_p_elements},
            {"dihedral_8", f.is_dihedral_8()}};
}

json defect_json(const PermGroup& G, const brauer::DefectData& d) {
    return {{"order", d.order()},
            {"subgroup", brauer::describe(G, d.defect_group)},
            {"generators", generators_json(G, d.defect_group)},
            {"class_size", d.class_size},
            {"fingerprint", fingerprint_json(d.fingerprint)}};
}

}  // namespace

// ---------------------------------------------------------------------------

Permutation parse_cycles(std::size_t degree, const std::string& text) {
    std::vector<std::vector<std::uint32_t>> cycles;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip();
    while (i < text.size()) {
        if (text[i] != '(') throw SpecError("expected '(' in \"" + text + "\"");
        ++i;
        std::vector<std::uint32_t> cyc;
        for (;;) {
            while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ',')) ++i;
            if (i >= text.size()) throw SpecError("unterminated cycle in \"" + text + "\"");
            if (text[i] == ')') {
                ++i;
                break;
            }
            if (!std::isdigit(static_cast<unsigned char>(text[i]))) throw SpecError("bad character in \"" + text + "\"");
            unsigned long v = 0;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                v = v * 10 + static_cast<unsigned long>(text[i] - '0');
                if (v > 1u << 20) throw SpecError("point too large in \"" + text + "\"");
                ++i;
            }
            cyc.push_back(static_cast<std::uint32_t>(v));
        }
        if (cyc.size() > 1) cycles.push_back(std::move(cyc));
        skip();
    }
    return checked_cycles(degree, cycles);
}

GroupSpec GroupSpec::parse(const std::string& raw) {
    const std::string text = trim(raw);
    GroupSpec out;
    std::smatch m;
    static const std::regex preset(R"(^([SsDd])(\d{1,6})$)");
    if (std::regex_match(text, m, preset)) {
        std::size_t v = std::stoul(m[2]);
        if (std::toupper(static_cast<unsigned char>(m[1].str()[0])) == 'S') {
            if (v < 1) throw SpecError("symmetric degree must be positive");
            out.canonical = {{"type", "symmetric"}, {"n", v}};
            out.label = "S" + std::to_string(v);
        } else {
            if (v < 4 || v % 2) throw SpecError("dihedral order must be even and at least 4");
            out.canonical = {{"type", "dihedral"}, {"order", v}};
            out.label = "D" + std::to_string(v);
        }
        return out;
    }
    if (text.empty() || text.front() != '{') throw SpecError("unrecognized group spec \"" + text + "\"");
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SpecError(std::string("group spec is not valid JSON: ") + e.what());
    }
    if (!j.contains("type") || !j["type"].is_string()) throw SpecError("group spec needs a \"type\"");
    const std::string type = j["type"];
    if (type == "symmetric") {
        std::size_t n = positive_field(j, "n");
        out.canonical = {{"type", "symmetric"}, {"n", n}};
        out.label = "S" + std::to_string(n);
    } else if (type == "dihedral") {
        std::size_t order = positive_field(j, "order");
        if (order < 4 || order % 2) throw SpecError("dihedral order must be even and at least 4");
        out.canonical = {{"type", "dihedral"}, {"order", order}};
        out.label = "D" + std::to_string(order);
    } else if (type == "generators") {
        std::size_t degree = positive_field(j, "degree");
        const char* key = j.contains("gens") ? "gens" : "generators";
        if (!j.contains(key) || !j[key].is_array()) throw SpecError("generator spec needs a \"gens\" list");
        json gens = json::array();
        for (const auto& g : j[key]) gens.push_back(cycles_json(generator_from_json(degree, g)));
        out.canonical = {{"type", "generators"}, {"degree", degree}, {"gens", gens}};
        out.label = j.contains("label") && j["label"].is_string() ? j["label"].get<std::string>() : "G";
    } else {
        throw SpecError("unknown group type \"" + type + "\"");
    }
    return out;
}

PermGroup GroupSpec::build(std::size_t max_elements) const {
    const std::string type = canonical["type"];
    if (type == "symmetric") return PermGroup::symmetric(canonical["n"].get<std::size_t>(), max_elements);
    if (type == "dihedral") return PermGroup::dihedral(canonical["order"].get<std::size_t>(), max_elements);
    const auto degree = canonical["degree"].get<std::size_t>();
    std::vector<Permutation> gens;
    for (const auto& g : canonical["gens"]) gens.push_back(generator_from_json(degree, g));
    return PermGroup::from_generators(degree, std::move(gens), label, max_elements);
}

std::vector<Target> default_corpus(bool include_slow) {
    std::vector<Target> out{
        {GroupSpec::parse("S3"), 2, 1, "all", false}, {GroupSpec::parse("S3"), 3, 1, "all", false},
        {GroupSpec::parse("S4"), 2, 1, "all", false}, {GroupSpec::parse("S5"), 2, 1, "all", false},
        {GroupSpec::parse("D8"), 2, 1, "all", false},
    };
    if (include_slow) out.push_back({GroupSpec::parse("S7"), 2, 1, "1", true});
    return out;
}

// ---------------------------------------------------------------------------

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 failed");
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return out.str();
}

std::string BlockCache::key(const GroupSpec& g, std::uint32_t p, std::uint32_t d) {
    return sha256_hex(g.canonical.dump() + "|" + std::to_string(p) + "|" + std::to_string(d) + "|" + kVersion);
}

namespace {

json cache_body(const GroupSpec& g, std::uint32_t p, std::uint32_t d) {
    return {{"version", kVersion}, {"group", g.canonical}, {"prime", p}, {"field_degree", d}};
}

}  // namespace

std::optional<std::vector<ff::Vector>> BlockCache::load(const GroupSpec& g, std::uint32_t p, std::uint32_t d) const {
    std::ifstream in(path_for(key(g, p, d)), std::ios::binary);
    if (!in) return std::nullopt;
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("checksum") || !j["checksum"].is_string()) return std::nullopt;
    const std::string stored = j["checksum"];
    j.erase("checksum");
    if (sha256_hex(j.dump()) != stored) return std::nullopt;
    json expect = cache_body(g, p, d);
    for (const auto& [k, v] : expect.items())
        if (!j.contains(k) || j[k] != v) return std::nullopt;
    if (!j.contains("blocks") || !j["blocks"].is_array()) return std::nullopt;
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < d; ++i) q *= p;
    std::vector<ff::Vector> out;
    for (const auto& row : j["blocks"]) {
        if (!row.is_array()) return std::nullopt;
        ff::Vector v;
        for (const auto& c : row) {
            if (!c.is_number_unsigned() || c.get<std::uint64_t>() >= q) return std::nullopt;
            v.emplace_back(c.get<std::uint32_t>());
        }
        out.push_back(std::move(v));
    }
    return out;
}

void BlockCache::store(const GroupSpec& g, std::uint32_t p, std::uint32_t d,
                       const std::vector<alg::Block>& blocks) const {
    json j = cache_body(g, p, d);
    json rows = json::array();
    for (const auto& b : blocks) {
        json row = json::array();
        for (auto c : b.class_coords) row.push_back(c.code());
        rows.push_back(std::move(row));
    }
    j["blocks"] = std::move(rows);
    j["checksum"] = sha256_hex(j.dump());

    std::filesystem::create_directories(dir_);
    const auto target = path_for(key(g, p, d));
    std::random_device rd;
    auto tmp = target;
    tmp += ".tmp." + std::to_string(rd()) + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
        out << j.dump(1) << '\n';
        if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> Session::selected_blocks() {
    const auto& bs = blocks();
    const std::string& sel = target.block;
    if (sel == "all") {
        std::vector<std::size_t> out(bs.size());
        for (std::size_t i = 0; i < bs.size(); ++i) out[i] = i;
        return out;
    }
    if (sel == "principal") {
        if (bs.empty() || !bs.front().principal) throw brauer::TheoryViolation("no principal block found");
        return {0};
    }
    if (sel.empty() || !std::all_of(sel.begin(), sel.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw SpecError("block selector must be principal, all, or an index");
    std::size_t i = std::stoul(sel);
    if (i >= bs.size())
        throw SpecError("block index " + sel + " out of range (" + std::to_string(bs.size()) + " blocks)");
    return {i};
}

json Session::target_json(std::optional<std::size_t> block) const {
    json out{{"group", target.group.label},
             {"spec", target.group.canonical},
             {"prime", target.prime},
             {"field_degree", field_degree}};
    if (block)
        out["block"] = *block;
    else
        out["block"] = target.block;
    return out;
}

std::unique_ptr<Session> open_session(const Target& t, const Options& opt) {
    if (!perm::is_prime(t.prime)) throw SpecError(std::to_string(t.prime) + " is not prime");
    auto s = std::make_unique<Session>();
    s->target = t;
    s->group = t.group.build(opt.max_elements);
    s->field_degree = t.field_degree ? t.field_degree : alg::auto_split_degree(s->group, t.prime);
    s->field = std::make_unique<ff::Field>(t.prime, s->field_degree);
    std::optional<BlockCache> cache;
    if (opt.cache_dir) cache.emplace(*opt.cache_dir);
    if (cache) {
        if (auto coords = cache->load(t.group, t.prime, s->field_degree)) {
            try {
                s->local = std::make_unique<brauer::LocalStructure>(s->group, *s->field, std::move(*coords));
                return s;
            } catch (const std::invalid_argument&) {
                s->local.reset();
            }
        }
    }
    s->local = std::make_unique<brauer::LocalStructure>(s->group, *s->field);
    s->local->blocks();
    if (cache) cache->store(t.group, t.prime, s->field_degree, s->local->blocks());
    return s;
}

// ---------------------------------------------------------------------------

int Report::exit_code() const {
    const auto& sum = doc.at("summary");
    if (sum.at("fail").get<std::size_t>() > 0) return 1;
    if (sum.at("skipped").get<std::size_t>() > 0) return 2;
    return 0;
}

namespace {

struct BlockWork {
    Session& s;
    std::size_t index;
    const Options& opt;
    std::optional<commuting::APoset> A;
    std::optional<commuting::KPoset> K;

    const alg::Block& block() { return s.blocks()[index]; }
    const commuting::APoset& a() {
        if (!A) A = commuting::build_A(*s.local, block());
        return *A;
    }
    const commuting::KPoset& k() {
        if (!K) K = commuting::build_K(*s.local, block(), a(), opt.max_poset_elements);
        return *K;
    }
};

json record(const std::string& name, json target) {
    return {{"name", name}, {"target", std::move(target)}, {"status", "pass"}, {"details", json::object()},
            {"witnesses", json::array()}};
}

void add_witnesses(json& rec, const std::vector<std::string>& ws) {
    for (const auto& w : ws) rec["witnesses"].push_back(w);
}

void settle(json& rec, bool ok, const std::string& fallback_witness) {
    rec["status"] = ok ? "pass" : "fail";
    if (!ok && rec["witnesses"].empty()) rec["witnesses"].push_back(fallback_witness);
}

void check_theorem1(BlockWork& w, json& rec) {
    const auto& A = w.a();
    const auto& K = w.k();
    auto r = commuting::theorem1_check(w.s.group, w.s.target.prime, A, K);
    const auto& c = r.certificate;
    rec["details"] = {{"a_size", r.a_size},
                      {"k_size", r.k_size},
                      {"psi_phi_identity", r.psi_phi_identity},
                      {"below_round_trip", r.below_round_trip},
                      {"certificate",
                       {{"phi_order_preserving", c.forward_order_preserving},
                        {"psi_order_preserving", c.backward_order_preserving},
                        {"phi_equivariant", c.forward_equivariant},
                        {"psi_equivariant", c.backward_equivariant},
                        {"source_direction", c.source_direction},
                        {"target_direction", c.target_direction},
                        {"pass", c.pass()}}}};
    add_witnesses(rec, r.witnesses);
    add_witnesses(rec, c.witnesses);
    settle(rec, r.pass(), "certificate failed without a recorded element");
}

void check_homology(BlockWork& w, json& rec) {
    auto h = commuting::homology_agreement(w.a().poset.poset(), w.k().poset.poset(), w.opt.max_simplices);
    rec["details"] = {{"euler_a", h.euler_a}, {"euler_k", h.euler_k}, {"euler_equal", h.euler_equal()},
                      {"computed", h.computed}};
    if (h.computed) {
        rec["details"]["homology_a"] = h.homology_a.describe();
        rec["details"]["homology_k"] = h.homology_k.describe();
    }
    if (!h.euler_equal()) {
        rec["witnesses"].push_back("euler characteristics differ: " + std::to_string(h.euler_a) + " vs " +
                                   std::to_string(h.euler_k));
        rec["status"] = "fail";
        return;
    }
    if (!h.computed) {
        rec["status"] = "skipped";
        rec["reason"] = h.skipped_reason;
        return;
    }
    settle(rec, h.homology_equal(), "A: " + h.homology_a.describe() + "; K: " + h.homology_k.describe());
}

void check_nonclique(BlockWork& w, json& rec) {
    const auto& b = w.block();
    const auto& K = w.k();
    auto ob = commuting::clique_witness(*w.s.local, b, K);
    const auto& G = w.s.group;
    rec["details"]["principal"] = b.principal;
    if (ob) {
        json triple = json::array();
        for (Element y : ob->clique) triple.push_back(commuting::describe(G, K, y));
        rec["details"]["obstruction"] = {{"clique", triple},
                                         {"generated", brauer::describe(G, ob->generated)},
                                         {"generated_order", ob->generated.order()},
                                         {"brauer_zero", ob->brauer_zero}};
        for (const auto& t : triple) rec["witnesses"].push_back(t);
        rec["witnesses"].push_back("generated " + brauer::describe(G, ob->generated) +
                                   (ob->brauer_zero ? " with vanishing Brauer image" : " with nonzero Brauer image"));
    } else {
        rec["details"]["obstruction"] = nullptr;
    }
    bool ok = b.principal ? !ob : (!ob || ob->brauer_zero);
    if (b.principal) {
        auto iso = commuting::principal_clique_check(G, w.s.target.prime, K);
        rec["details"]["clique_complex_iso"] = iso.pass;
        if (!iso.pass) rec["witnesses"].push_back(iso.witness);
        ok = ok && iso.pass;
    }
    settle(rec, ok, "obstruction without certificate");
}

void check_principal_type(BlockWork& w, json& rec) {
    auto r = brauer::is_principal_type(*w.s.local, w.block());
    rec["details"] = {{"value", r.value}, {"classes_checked", r.checked}};
    if (r.witness) {
        rec["details"]["blocks_at_witness"] = r.blocks_at_witness;
        rec["witnesses"].push_back(brauer::describe(w.s.group, *r.witness) + " carries " +
                                   std::to_string(r.blocks_at_witness) + " blocks");
    }
    settle(rec, r.value, "principal type failed");
}

void check_theorem2(BlockWork& w, json& rec) {
    auto r = fusion::theorem2_check(*w.s.local, w.block(), w.k());
    rec["details"] = {{"class_count", r.class_count},
                      {"orbit_count", r.orbit_count},
                      {"forward_well_defined", r.forward_well_defined},
                      {"eta_well_defined", r.eta_well_defined},
                      {"mutually_inverse", r.mutually_inverse},
                      {"forward_iso", r.forward_iso.pass},
                      {"inverse_iso", r.inverse_iso.pass}};
    add_witnesses(rec, r.witnesses);
    if (!r.forward_iso.pass && !r.forward_iso.witness.empty()) rec["witnesses"].push_back(r.forward_iso.witness);
    if (!r.inverse_iso.pass && !r.inverse_iso.witness.empty()) rec["witnesses"].push_back(r.inverse_iso.witness);
    settle(rec, r.pass(), "class and orbit counts differ");
}

void run_check(const std::string& name, BlockWork& w, json& rec) {
    try {
        if (name == "theorem1")
            check_theorem1(w, rec);
        else if (name == "homology")
            check_homology(w, rec);
        else if (name == "nonclique")
            check_nonclique(w, rec);
        else if (name == "principal-type")
            check_principal_type(w, rec);
        else if (name == "theorem2")
            check_theorem2(w, rec);
        else
            throw SpecError("unknown check " + name);
    } catch (const perm::SizeBoundExceeded& e) {
        rec["status"] = "skipped";
        rec["reason"] = e.what();
    } catch (const commuting::ElementBoundExceeded& e) {
        rec["status"] = "skipped";
        rec["reason"] = e.what();
    } catch (const topo::SimplexBoundExceeded& e) {
        rec["status"] = "skipped";
        rec["reason"] = e.what();
    } catch (const alg::OracleBoundExceeded& e) {
        rec["status"] = "skipped";
        rec["reason"] = e.what();
    } catch (const SpecError&) {
        throw;
    } catch (const std::exception& e) {
        rec["status"] = "fail";
        rec["witnesses"].push_back(std::string("error: ") + e.what());
    }
}

std::vector<json> verify_target(const Target& t, const std::vector<std::string>& checks, const Options& opt) {
    std::vector<json> out;
    std::unique_ptr<Session> s;
    std::vector<std::size_t> selected;
    json target{{"group", t.group.label}, {"spec", t.group.canonical}, {"prime", t.prime},
                {"field_degree", t.field_degree}, {"block", t.block}};
    try {
        s = open_session(t, opt);
        selected = s->selected_blocks();
    } catch (const SpecError&) {
        throw;
    } catch (const std::exception& e) {
        bool bound = dynamic_cast<const perm::SizeBoundExceeded*>(&e) != nullptr;
        for (const auto& name : checks) {
            json rec = record(name, target);
            if (bound) {
                rec["status"] = "skipped";
                rec["reason"] = e.what();
            } else {
                rec["status"] = "fail";
                rec["witnesses"].push_back(std::string("error: ") + e.what());
            }
            out.push_back(std::move(rec));
        }
        return out;
    }
    for (std::size_t bi : selected) {
        BlockWork w{*s, bi, opt, std::nullopt, std::nullopt};
        for (const auto& name : checks) {
            json rec = record(name, s->target_json(bi));
            auto start = std::chrono::steady_clock::now();
            run_check(name, w, rec);
            if (opt.timings)
                rec["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            out.push_back(std::move(rec));
        }
    }
    return out;
}

}  // namespace

Report run_verify(const std::vector<Target>& targets, const std::vector<std::string>& checks, const Options& opt) {
    for (const auto& c : checks)
        if (std::find(kAllChecks.begin(), kAllChecks.end(), c) == kAllChecks.end()) throw SpecError("unknown check " + c);

    std::vector<std::vector<json>> results(targets.size());
    std::vector<std::exception_ptr> errors(targets.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < targets.size();) {
            try {
                results[i] = verify_target(targets[i], checks, opt);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned jobs = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(targets.size())));
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    json all = json::array();
    std::size_t pass = 0, fail = 0, skipped = 0;
    for (auto& r : results)
        for (auto& rec : r) {
            const std::string st = rec["status"];
            (st == "pass" ? pass : st == "fail" ? fail : skipped)++;
            all.push_back(std::move(rec));
        }
    Report rep;
    rep.doc = {{"tool", "commcat"},
               {"version", kVersion},
               {"checks", std::move(all)},
               {"summary", {{"total", pass + fail + skipped}, {"pass", pass}, {"fail", fail}, {"skipped", skipped}}}};
    rep.doc["summary"]["exit_code"] = rep.exit_code();
    return rep;
}

// ---------------------------------------------------------------------------

json blocks_listing(const Target& t, const Options& opt) {
    auto s = open_session(t, opt);
    const auto& G = s->group;
    json blocks = json::array();
    for (std::size_t i = 0; i < s->blocks().size(); ++i) {
        const auto& b = s->blocks()[i];
        auto d = brauer::defect_groups(*s->local, b);
        std::size_t support = 0;
        for (auto c : b.class_coords) support += !c.is_zero();
        blocks.push_back({{"index", i},
                          {"principal", b.principal},
                          {"augmentation", s->field->to_string(b.augmentation)},
                          {"class_support", support},
                          {"defect", defect_json(G, d)}});
    }
    return {{"target", s->target_json()}, {"block_count", blocks.size()}, {"blocks", blocks}};
}

std::string blocks_text(const json& listing) {
    std::ostringstream out;
    const auto& t = listing["target"];
    out << t["group"].get<std::string>() << " p=" << t["prime"] << " d=" << t["field_degree"] << ": "
        << listing["block_count"] << " block" << (listing["block_count"] == 1 ? "" : "s") << '\n';
    for (const auto& b : listing["blocks"]) {
        const auto& d = b["defect"];
        const auto& f = d["fingerprint"];
        out << "  block " << b["index"] << (b["principal"].get<bool>() ? " (principal)" : "")
            << " augmentation=" << b["augmentation"].get<std::string>() << " defect order=" << d["order"]
            << " exponent=" << f["exponent"] << (f["abelian"].get<bool>() ? " abelian" : " nonabelian")
            << (f["cyclic"].get<bool>() ? " cyclic" : " noncyclic")
            << (f["dihedral_8"].get<bool>() ? " dihedral" : "") << " defect group " << d["subgroup"].get<std::string>()
            << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Subgroup> conjugation_closure(const PermGroup& G, std::vector<Subgroup> seeds) {
    std::set<Subgroup> seen(seeds.begin(), seeds.end());
    std::vector<Subgroup> frontier(seen.begin(), seen.end());
    while (!frontier.empty()) {
        std::vector<Subgroup> next;
        for (const auto& H : frontier)
            for (Index g : G.generator_indices()) {
                Subgroup C = perm::conjugate_subgroup(G, H, g);
                if (seen.insert(C).second) next.push_back(std::move(C));
            }
        frontier = std::move(next);
    }
    return {seen.begin(), seen.end()};
}

// Every subgroup generated by a subset of some listed generator set, the empty subset included.
std::vector<Subgroup> generator_subset_closure(const PermGroup& G, const std::vector<std::vector<Index>>& gens) {
    std::set<Subgroup> out;
    for (const auto& g : gens) {
        if (g.size() > 16) throw SpecError("at most 16 generators per family member");
        for (std::uint32_t mask = 0; mask < (1u << g.size()); ++mask) {
            std::vector<Index> pick;
            for (std::size_t i = 0; i < g.size(); ++i)
                if (mask >> i & 1) pick.push_back(g[i]);
            out.insert(perm::generated_subgroup(G, pick));
        }
    }
    return {out.begin(), out.end()};
}

std::vector<Index> elements_from_strings(const PermGroup& G, const std::vector<std::string>& gens) {
    std::vector<Index> idx;
    for (const auto& s : gens) {
        auto x = G.find(parse_cycles(G.degree(), s));
        if (!x) throw SpecError(s + " is not an element of " + G.label());
        idx.push_back(*x);
    }
    return idx;
}

std::vector<Element> plain_orbits(std::size_t n) {
    std::vector<Element> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<Element>(i);
    return out;
}

topo::Poset relabel_orbits(const topo::OrbitPoset& O, const topo::Poset& base) {
    std::vector<std::pair<Element, Element>> rel = O.poset.relation();
    std::vector<std::string> labels;
    for (const auto& orbit : O.orbits) labels.push_back("[" + base.label(orbit.front()) + "]");
    return topo::Poset::from_relation(O.poset.size(), rel, std::move(labels));
}

}  // namespace

PosetExport export_poset(const Target& t, const std::string& which, const Options& opt,
                         const std::optional<std::vector<std::vector<std::string>>>& family) {
    static const std::vector<std::string> kinds{"A", "K", "K-orbit", "brauer-pairs", "iso-classes"};
    if (std::find(kinds.begin(), kinds.end(), which) == kinds.end()) throw SpecError("unknown poset " + which);
    if (family && which != "brauer-pairs") throw SpecError("a subgroup family only applies to brauer-pairs");
    auto s = open_session(t, opt);
    auto sel = s->selected_blocks();
    if (sel.size() != 1) throw SpecError("poset export needs a single block (use --block principal or an index)");
    const auto& G = s->group;
    const auto& b = s->blocks()[sel.front()];
    auto& L = *s->local;

    PosetExport out;
    out.which = which;
    out.target = s->target_json(sel.front());
    if (which == "A" || which == "K" || which == "K-orbit") {
        auto A = commuting::build_A(L, b);
        if (which == "A") {
            out.orbit_of = topo::orbit_poset(A.poset).orbit_of;
            out.poset = A.poset.poset();
        } else {
            auto K = commuting::build_K(L, b, A, opt.max_poset_elements);
            auto O = topo::orbit_poset(K.poset);
            if (which == "K") {
                out.orbit_of = O.orbit_of;
                out.poset = K.poset.poset();
            } else {
                out.poset = relabel_orbits(O, K.poset.poset());
                out.orbit_of = plain_orbits(out.poset.size());
            }
        }
    } else if (which == "brauer-pairs") {
        std::vector<Subgroup> fam;
        bool action = !family;
        if (family) {
            std::vector<std::vector<Index>> gens;
            for (const auto& g : *family) gens.push_back(elements_from_strings(G, g));
            fam = generator_subset_closure(G, gens);
        } else {
            auto d = brauer::defect_groups(L, b);
            fam = conjugation_closure(G, perm::all_subgroups_of(G, d.defect_group));
        }
        auto P = brauer::containment_poset(L, b, std::move(fam), action);
        if (action) out.orbit_of = topo::orbit_poset(P.poset).orbit_of;
        out.poset = P.poset.poset();
    } else {
        fusion::FusionSystem FS(L, b);
        auto C = fusion::commuting_category(FS, t.prime);
        auto I = fusion::iso_class_poset(FS, C);
        out.poset = I.poset;
        out.orbit_of = plain_orbits(out.poset.size());
    }
    return out;
}

json poset_json(const PosetExport& x) {
    const auto& P = x.poset;
    json elements = json::array();
    for (Element a = 0; a < P.size(); ++a)
        elements.push_back({{"id", a}, {"label", P.label(a)}, {"orbit", x.orbit_of ? json((*x.orbit_of)[a]) : json()}});
    json leq = json::array();
    auto strict = P.relation();
    std::size_t k = 0;
    for (Element a = 0; a < P.size(); ++a) {
        std::vector<std::pair<Element, Element>> row{{a, a}};
        for (; k < strict.size() && strict[k].first == a; ++k) row.push_back(strict[k]);
        std::sort(row.begin(), row.end());
        for (auto [i, j] : row) leq.push_back({i, j});
    }
    json covering = json::array();
    for (auto [i, j] : P.covering()) covering.push_back({i, j});
    return {{"which", x.which}, {"target", x.target},     {"empty", P.size() == 0},
            {"elements", elements}, {"leq", leq}, {"covering", covering}};
}

std::string poset_dot(const PosetExport& x) {
    std::string name = x.which + " " + x.target["group"].get<std::string>() + " p=" +
                       std::to_string(x.target["prime"].get<unsigned>()) + " block " +
                       x.target["block"].dump();
    return topo::to_dot(x.poset, name, x.orbit_of ? &*x.orbit_of : nullptr);
}

// ---------------------------------------------------------------------------

std::optional<DihedralHit> find_dihedral_block(unsigned from, unsigned to, const Options& opt) {
    for (unsigned n = from; n <= to && n >= from; ++n) {
        Target t{GroupSpec::parse("S" + std::to_string(n)), 2, 1, "all", false};
        auto s = open_session(t, opt);
        for (std::size_t i = 0; i < s->blocks().size(); ++i) {
            if (s->blocks()[i].principal) continue;
            auto d = brauer::defect_groups(*s->local, s->blocks()[i]);
            if (d.fingerprint.is_dihedral_8()) return DihedralHit{n, i, defect_json(s->group, d)};
        }
        if (n == std::numeric_limits<unsigned>::max()) break;
    }
    return std::nullopt;
}

json dihedral_json(unsigned from, unsigned to, const std::optional<DihedralHit>& hit) {
    json out{{"range", {from, to}}, {"prime", 2}, {"found", hit.has_value()}};
    if (hit) {
        out["n"] = hit->n;
        out["block"] = hit->block;
        out["defect"] = hit->defect;
    }
    return out;
}

}  // namespace commcat::harness
