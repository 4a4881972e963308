#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "commcat/brauer.hpp"
#include "commcat/commuting.hpp"
#include "commcat/fusion.hpp"

namespace commcat::harness {

using nlohmann::json;

inline constexpr const char* kVersion = "0.3.0";

struct SpecError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Parsed --group argument. Accepts presets (S<n>, D<order>) or JSON:
/// {"type":"symmetric","n":7}, {"type":"dihedral","order":8},
/// {"type":"generators","degree":4,"gens":[[[1,2]],[[1,2,3,4]]]}. A generator may
/// also be a single cycle [1,2,3] or a string "(1 2)(3 4)".
struct GroupSpec {
    json canonical;
    std::string label;

    static GroupSpec parse(const std::string& text);
    perm::PermGroup build(std::size_t max_elements = perm::kDefaultMaxElements) const;
};

/// "(1 2)(3 4)" or "(1,2)(3,4)"; "()" is the identity.
perm::Permutation parse_cycles(std::size_t degree, const std::string& text);

struct Target {
    GroupSpec group;
    std::uint32_t prime = 2;
    /// 0 selects the automatic splitting degree.
    std::uint32_t field_degree = 1;
    /// "principal", "all" or a block index.
    std::string block = "all";
    bool slow = false;
};

/// The shipped corpus; the degree-7 entry is slow and only included on request.
std::vector<Target> default_corpus(bool include_slow);

struct Options {
    std::optional<std::filesystem::path> cache_dir;
    std::size_t max_elements = perm::kDefaultMaxElements;
    std::size_t max_simplices = topo::kDefaultMaxSimplices;
    std::size_t max_poset_elements = commuting::kDefaultMaxPosetElements;
    unsigned jobs = 1;
    bool timings = false;
};

std::string sha256_hex(const std::string& data);

/// Block coordinates of Z(kG), keyed by a hash of (group spec, p, d, version).
class BlockCache {
public:
    explicit BlockCache(std::filesystem::path dir) : dir_(std::move(dir)) {}
    static std::string key(const GroupSpec& g, std::uint32_t p, std::uint32_t d);
    std::filesystem::path path_for(const std::string& key) const { return dir_ / (key + ".json"); }
    /// Nothing when the entry is missing, unreadable, or fails its checksum.
    std::optional<std::vector<ff::Vector>> load(const GroupSpec& g, std::uint32_t p, std::uint32_t d) const;
    /// Write-temp-then-rename.
    void store(const GroupSpec& g, std::uint32_t p, std::uint32_t d, const std::vector<alg::Block>& blocks) const;

private:
    std::filesystem::path dir_;
};

/// Group, field and local structure for one target.
struct Session {
    Target target;
    std::uint32_t field_degree = 1;
    perm::PermGroup group;
    std::unique_ptr<ff::Field> field;
    std::unique_ptr<brauer::LocalStructure> local;

    const std::vector<alg::Block>& blocks() { return local->blocks(); }
    std::vector<std::size_t> selected_blocks();
    json target_json(std::optional<std::size_t> block = std::nullopt) const;
};

std::unique_ptr<Session> open_session(const Target& t, const Options& opt);

inline const std::vector<std::string> kAllChecks{"theorem1", "theorem2", "nonclique", "principal-type", "homology"};

struct Report {
    json doc;
    /// 0 all pass, 1 some failure, 2 skips without failures.
    int exit_code() const;
};

Report run_verify(const std::vector<Target>& targets, const std::vector<std::string>& checks, const Options& opt);

json blocks_listing(const Target& t, const Options& opt);
std::string blocks_text(const json& listing);

struct PosetExport {
    std::string which;
    json target;
    topo::Poset poset;
    /// Orbit id per element; absent when no group action applies.
    std::optional<std::vector<topo::Element>> orbit_of;
};

/// which: A, K, K-orbit, brauer-pairs, iso-classes. The target must select a
/// single block. family (brauer-pairs only): subgroups as generator lists in
/// cycle notation, extended by the subgroups generated by subsets of each list;
/// by default the family is every G-conjugate of a subgroup of a defect group.
PosetExport export_poset(const Target& t, const std::string& which, const Options& opt,
                         const std::optional<std::vector<std::vector<std::string>>>& family = std::nullopt);
/// {"which","target","empty","elements":[{"id","label","orbit"}],"leq","covering"}; leq is reflexive.
json poset_json(const PosetExport& x);
std::string poset_dot(const PosetExport& x);

struct DihedralHit {
    unsigned n = 0;
    std::size_t block = 0;
    json defect;
};

/// First S_n, n in [from, to], with a nonprincipal 2-block whose defect group is
/// dihedral of order 8.
std::optional<DihedralHit> find_dihedral_block(unsigned from, unsigned to, const Options& opt);
json dihedral_json(unsigned from, unsigned to, const std::optional<DihedralHit>& hit);

}  // namespace commcat::harness
