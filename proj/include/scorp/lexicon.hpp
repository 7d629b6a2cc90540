#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace scorp {

class EmbeddingTable;

// One word's KB annotation: the word plus its sememe names.
struct KbRecord {
  std::string word;
  std::set<std::string> sememes;
};

// The closed label set. Ids are assigned by descending KB count, ties broken
// lexicographically, so the mapping is a pure function of the records.
struct SememeInventory {
  std::vector<std::string> names;           // id -> name
  std::map<std::string, std::size_t> ids;   // name -> id
  std::vector<std::uint64_t> counts;        // id -> KB occurrence count

  std::size_t size() const { return names.size(); }
  bool contains(const std::string& name) const { return ids.count(name) != 0; }
};

struct LexEntry {
  std::string word;
  std::vector<std::size_t> sememes;      // sorted gold ids, non-empty
  std::vector<std::string> definition;   // concatenated over all senses, non-empty
  std::uint64_t frequency = 0;
  bool has_embedding = false;
};

enum class Split : std::uint8_t { Train = 0, Val = 1, Test = 2 };

constexpr std::size_t kNoFold = static_cast<std::size_t>(-1);

struct Dataset {
  std::vector<LexEntry> entries;   // sorted by word
  SememeInventory inventory;
  std::vector<Split> split;        // parallel to entries; empty until split_dataset
  std::vector<std::size_t> fold;   // parallel to entries; kNoFold when unset

  std::vector<std::size_t> split_indices(Split s) const;
};

// `word TAB sememe1,sememe2,...`; duplicate words merge by set union.
std::vector<KbRecord> load_kb(const std::string& path);

SememeInventory build_inventory(const std::vector<KbRecord>& records,
                                std::uint64_t min_count = 5);

// `word TAB tok1 tok2 ...`; repeated words concatenate in file order.
std::map<std::string, std::vector<std::string>> load_definitions(const std::string& path);

// `word TAB count` sidecar; absent words default to frequency 0.
std::map<std::string, std::uint64_t> load_frequencies(const std::string& path);

Dataset assemble_dataset(const std::vector<KbRecord>& kb,
                         const std::map<std::string, std::vector<std::string>>& defs,
                         const SememeInventory& inventory, const EmbeddingTable& table,
                         const std::map<std::string, std::uint64_t>& frequencies,
                         bool require_embedding);

// Deterministic seeded 8:1:1-style split; sizes match the ratios within +-1
// via largest-remainder apportionment.
void split_dataset(Dataset& ds, std::uint64_t seed,
                   const std::vector<std::size_t>& ratios = {8, 1, 1});

// k disjoint folds covering all entries (cross-validation mode).
void assign_folds(Dataset& ds, std::uint64_t seed, std::size_t k);

// In k-fold mode: test = fold `test_fold`, val = fold (test_fold+1)%k,
// train = the rest. Overwrites the split tags.
void apply_fold_split(Dataset& ds, std::size_t test_fold);

// word -> sorted inventory-filtered sememe ids, for every KB word (not just
// dataset entries); serves +SE lookups of definition tokens.
std::map<std::string, std::vector<std::size_t>> build_kb_index(
    const std::vector<KbRecord>& kb, const SememeInventory& inventory);

// -- plain-TSV persistence ----------------------------------------------------

std::string manifest_to_text(const Dataset& ds);
// Applies split/fold tags from manifest text onto an assembled dataset;
// errors if the word sets disagree.
void apply_manifest(Dataset& ds, const std::string& manifest_text);

std::string inventory_to_text(const SememeInventory& inv);
SememeInventory inventory_from_text(const std::string& text);

}  // namespace scorp
