// commcat: block listings, verification reports, poset export and the
// dihedral-defect search.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "commcat/harness.hpp"

namespace h = commcat::harness;

namespace {

constexpr int kUsageError = 64;

struct Common {
    std::string group;
    std::uint32_t prime = 2;
    std::uint32_t field_degree = 1;
    bool auto_split = false;
    std::string block = "all";
    std::string out;
    std::string format = "json";
    std::string cache_dir;
    std::size_t max_elements = commcat::perm::kDefaultMaxElements;
    std::size_t max_simplices = commcat::topo::kDefaultMaxSimplices;
    std::size_t max_poset_elements = commcat::commuting::kDefaultMaxPosetElements;
    unsigned jobs = 1;
    bool timings = false;
};

void add_target_flags(CLI::App* app, Common& c, bool group_required) {
    auto* g = app->add_option("--group", c.group, "Preset (S7, D8) or JSON group spec");
    if (group_required) g->required();
    app->add_option("--prime", c.prime, "Characteristic p")->check(CLI::PositiveNumber);
    auto* fd = app->add_option("--field-degree", c.field_degree, "Work over GF(p^d)")->check(CLI::PositiveNumber);
    app->add_flag("--auto-split", c.auto_split, "Pick d so that GF(p^d) splits the group")->excludes(fd);
}

void add_run_flags(CLI::App* app, Common& c) {
    app->add_option("--out", c.out, "Write output here instead of stdout");
    app->add_option("--cache-dir", c.cache_dir, "Directory for cached block idempotents");
    app->add_option("--max-elements", c.max_elements, "Largest group order accepted");
    app->add_option("--max-simplices", c.max_simplices, "Largest complex for which homology is computed");
    app->add_option("--max-poset-elements", c.max_poset_elements, "Largest K(b) built");
}

h::Options options(const Common& c) {
    h::Options o;
    if (!c.cache_dir.empty()) o.cache_dir = c.cache_dir;
    o.max_elements = c.max_elements;
    o.max_simplices = c.max_simplices;
    o.max_poset_elements = c.max_poset_elements;
    o.jobs = std::max(1u, c.jobs);
    o.timings = c.timings;
    return o;
}

h::Target target(const Common& c) {
    return h::Target{h::GroupSpec::parse(c.group), c.prime, c.auto_split ? 0u : c.field_degree, c.block, false};
}

void emit(const Common& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + c.out);
    f << text;
}

std::vector<std::string> split_checks(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto end = s.find(',', start);
        if (end == std::string::npos) end = s.size();
        if (end > start) out.push_back(s.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Blocks, Brauer pairs and commuting posets of finite permutation groups"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(h::kVersion));

    Common blocks_c, verify_c, poset_c, dihedral_c;

    auto* blocks = app.add_subcommand("blocks", "List the blocks of kG with defect groups");
    add_target_flags(blocks, blocks_c, true);
    add_run_flags(blocks, blocks_c);
    blocks->add_option("--format", blocks_c.format, "json or text")->check(CLI::IsMember({"json", "text"}));

    auto* verify = app.add_subcommand("verify", "Run verification suites and write a JSON report");
    add_target_flags(verify, verify_c, false);
    add_run_flags(verify, verify_c);
    std::string checks = "theorem1,theorem2,nonclique,principal-type,homology";
    bool include_slow = false;
    verify->add_option("--block", verify_c.block, "principal, all, or a block index");
    verify->add_option("--checks", checks, "Comma-separated subset of the suites");
    verify->add_flag("--include-slow", include_slow, "Add the slow corpus entry when no --group is given");
    verify->add_option("--jobs", verify_c.jobs, "Corpus entries processed in parallel")->check(CLI::PositiveNumber);
    verify->add_flag("--timings", verify_c.timings, "Record per-check seconds (reports stop being reproducible)");

    auto* poset = app.add_subcommand("poset", "Export one of the posets attached to a block");
    add_target_flags(poset, poset_c, true);
    add_run_flags(poset, poset_c);
    poset_c.block = "principal";
    std::string which = "K";
    std::string family;
    poset->add_option("--block", poset_c.block, "principal or a block index");
    poset->add_option("--which", which, "A, K, K-orbit, brauer-pairs or iso-classes")
        ->check(CLI::IsMember({"A", "K", "K-orbit", "brauer-pairs", "iso-classes"}));
    poset->add_option("--format", poset_c.format, "json or dot")->check(CLI::IsMember({"json", "dot"}));
    poset->add_option("--family", family,
                      "brauer-pairs only: JSON list of subgroups, each a list of cycle strings");

    auto* dihedral = app.add_subcommand("find-dihedral-block", "First S_n with a nonprincipal 2-block of defect group D8");
    unsigned from = 6, to = 8;
    dihedral->add_option("--from", from, "Smallest n")->check(CLI::PositiveNumber);
    dihedral->add_option("--to", to, "Largest n");
    dihedral->add_option("--out", dihedral_c.out, "Write output here instead of stdout");
    dihedral->add_option("--cache-dir", dihedral_c.cache_dir, "Directory for cached block idempotents");
    dihedral->add_option("--max-elements", dihedral_c.max_elements, "Largest group order accepted");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*blocks) {
            auto listing = h::blocks_listing(target(blocks_c), options(blocks_c));
            emit(blocks_c, blocks_c.format == "text" ? h::blocks_text(listing) : listing.dump(2) + "\n");
            return 0;
        }
        if (*verify) {
            std::vector<h::Target> targets;
            if (verify_c.group.empty()) {
                targets = h::default_corpus(include_slow);
                if (verify->count("--block"))
                    for (auto& t : targets) t.block = verify_c.block;
            } else {
                targets.push_back(target(verify_c));
            }
            auto report = h::run_verify(targets, split_checks(checks), options(verify_c));
            emit(verify_c, report.doc.dump(2) + "\n");
            const auto& s = report.doc["summary"];
            std::cerr << s["pass"] << " passed, " << s["fail"] << " failed, " << s["skipped"] << " skipped\n";
            return report.exit_code();
        }
        if (*poset) {
            std::optional<std::vector<std::vector<std::string>>> fam;
            if (!family.empty()) {
                auto j = nlohmann::json::parse(family, nullptr, false);
                if (j.is_discarded() || !j.is_array()) throw h::SpecError("--family must be a JSON list");
                try {
                    fam = j.get<std::vector<std::vector<std::string>>>();
                } catch (const nlohmann::json::exception&) {
                    throw h::SpecError("--family entries must be lists of cycle strings");
                }
            }
            auto x = h::export_poset(target(poset_c), which, options(poset_c), fam);
            emit(poset_c, poset_c.format == "dot" ? h::poset_dot(x) : h::poset_json(x).dump(2) + "\n");
            return 0;
        }
        if (*dihedral) {
            auto hit = h::find_dihedral_block(from, to, options(dihedral_c));
            emit(dihedral_c, h::dihedral_json(from, to, hit).dump(2) + "\n");
            return hit ? 0 : 1;
        }
    } catch (const h::SpecError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
