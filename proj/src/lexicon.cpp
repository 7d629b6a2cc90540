#include "scorp/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "scorp/embeddings.hpp"
#include "scorp/rng.hpp"
#include "scorp/util.hpp"

namespace scorp {

namespace {

[[noreturn]] void parse_error(const std::string& path, std::size_t line_no,
                              const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

// Lines of a text file with trailing \r stripped; final missing newline ok.
std::vector<std::string> file_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

std::vector<std::size_t> Dataset::split_indices(Split s) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < split.size(); ++i)
    if (split[i] == s) out.push_back(i);
  return out;
}

std::vector<KbRecord> load_kb(const std::string& path) {
  auto lines = file_lines(path);
  std::map<std::string, std::set<std::string>> merged;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (trim(line).empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) parse_error(path, i + 1, "missing TAB separator");
    std::string word = line.substr(0, tab);
    if (word.empty()) parse_error(path, i + 1, "empty word");
    std::set<std::string> sememes;
    for (const auto& s : split_char(line.substr(tab + 1), ',')) {
      auto t = trim(s);
      if (!t.empty()) sememes.insert(std::string(t));
    }
    if (sememes.empty()) parse_error(path, i + 1, "empty sememe list");
    merged[word].insert(sememes.begin(), sememes.end());
  }
  std::vector<KbRecord> out;
  out.reserve(merged.size());
  for (auto& [word, sememes] : merged) out.push_back({word, std::move(sememes)});
  return out;
}

SememeInventory build_inventory(const std::vector<KbRecord>& records,
                                std::uint64_t min_count) {
  if (records.empty()) throw std::runtime_error("build_inventory: no records");
  std::map<std::string, std::uint64_t> counts;
  for (const auto& rec : records)
    for (const auto& s : rec.sememes) counts[s] += 1;

  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (const auto& [name, c] : counts)
    if (c >= min_count) kept.emplace_back(name, c);
  if (kept.empty()) throw std::runtime_error("build_inventory: empty inventory");

  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  SememeInventory inv;
  for (std::size_t id = 0; id < kept.size(); ++id) {
    inv.names.push_back(kept[id].first);
    inv.counts.push_back(kept[id].second);
    inv.ids[kept[id].first] = id;
  }
  return inv;
}

std::map<std::string, std::vector<std::string>> load_definitions(const std::string& path) {
  auto lines = file_lines(path);
  std::map<std::string, std::vector<std::string>> defs;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (trim(line).empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) parse_error(path, i + 1, "missing TAB separator");
    std::string word = line.substr(0, tab);
    if (word.empty()) parse_error(path, i + 1, "empty word");
    auto tokens = split_ws(line.substr(tab + 1));
    if (tokens.empty()) parse_error(path, i + 1, "empty token list");
    auto& seq = defs[word];
    seq.insert(seq.end(), tokens.begin(), tokens.end());
  }
  return defs;
}

std::map<std::string, std::uint64_t> load_frequencies(const std::string& path) {
  auto lines = file_lines(path);
  std::map<std::string, std::uint64_t> freq;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (trim(line).empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) parse_error(path, i + 1, "missing TAB separator");
    std::string word = line.substr(0, tab);
    std::uint64_t count = 0;
    if (!parse_u64(trim(line.substr(tab + 1)), count))
      parse_error(path, i + 1, "bad count");
    freq[word] = count;
  }
  return freq;
}

Dataset assemble_dataset(const std::vector<KbRecord>& kb,
                         const std::map<std::string, std::vector<std::string>>& defs,
                         const SememeInventory& inventory, const EmbeddingTable& table,
                         const std::map<std::string, std::uint64_t>& frequencies,
                         bool require_embedding) {
  Dataset ds;
  ds.inventory = inventory;
  for (const auto& rec : kb) {
    auto dit = defs.find(rec.word);
    if (dit == defs.end() || dit->second.empty()) continue;
    bool in_table = table.contains(rec.word);
    if (require_embedding && !in_table) continue;

    std::vector<std::size_t> gold;
    for (const auto& name : rec.sememes) {
      auto it = inventory.ids.find(name);
      if (it != inventory.ids.end()) gold.push_back(it->second);
    }
    if (gold.empty()) continue;  // all sememes were frequency-filtered
    std::sort(gold.begin(), gold.end());

    LexEntry entry;
    entry.word = rec.word;
    entry.sememes = std::move(gold);
    entry.definition = dit->second;
    auto fit = frequencies.find(rec.word);
    entry.frequency = fit == frequencies.end() ? 0 : fit->second;
    entry.has_embedding = in_table;
    ds.entries.push_back(std::move(entry));
  }
  if (ds.entries.empty()) throw std::runtime_error("assemble_dataset: empty intersection");
  std::sort(ds.entries.begin(), ds.entries.end(),
            [](const LexEntry& a, const LexEntry& b) { return a.word < b.word; });
  ds.fold.assign(ds.entries.size(), kNoFold);
  return ds;
}

void split_dataset(Dataset& ds, std::uint64_t seed, const std::vector<std::size_t>& ratios) {
  std::size_t n = ds.entries.size();
  if (ratios.size() != 3) throw std::runtime_error("split_dataset: need 3 ratios");
  std::size_t parts = 0;
  for (std::size_t r : ratios)
    if (r > 0) ++parts;
  if (n < parts) throw std::runtime_error("split_dataset: fewer entries than splits");

  // largest-remainder apportionment of n over the ratios
  std::size_t total = ratios[0] + ratios[1] + ratios[2];
  std::vector<std::size_t> sizes(3);
  std::vector<std::pair<double, std::size_t>> rema;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    double exact = static_cast<double>(n) * static_cast<double>(ratios[i]) /
                   static_cast<double>(total);
    sizes[i] = static_cast<std::size_t>(exact);
    assigned += sizes[i];
    rema.emplace_back(exact - static_cast<double>(sizes[i]), i);
  }
  std::sort(rema.begin(), rema.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) sizes[rema[k % 3].second] += 1;

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(sub_seed(seed, "split"));
  rng.shuffle(order);

  ds.split.assign(n, Split::Train);
  std::size_t pos = 0;
  for (std::size_t s = 0; s < 3; ++s)
    for (std::size_t k = 0; k < sizes[s]; ++k) ds.split[order[pos++]] = static_cast<Split>(s);
}

void assign_folds(Dataset& ds, std::uint64_t seed, std::size_t k) {
  std::size_t n = ds.entries.size();
  if (k < 2) throw std::runtime_error("assign_folds: k must be >= 2");
  if (n < k) throw std::runtime_error("assign_folds: fewer entries than folds");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(sub_seed(seed, "split", 1));
  rng.shuffle(order);
  ds.fold.assign(n, kNoFold);
  for (std::size_t i = 0; i < n; ++i) ds.fold[order[i]] = i % k;
}

void apply_fold_split(Dataset& ds, std::size_t test_fold) {
  std::size_t k = 0;
  for (std::size_t f : ds.fold)
    if (f != kNoFold) k = std::max(k, f + 1);
  if (k == 0) throw std::runtime_error("apply_fold_split: dataset has no folds");
  if (test_fold >= k) throw std::runtime_error("apply_fold_split: fold out of range");
  std::size_t val_fold = (test_fold + 1) % k;
  ds.split.assign(ds.entries.size(), Split::Train);
  for (std::size_t i = 0; i < ds.entries.size(); ++i) {
    if (ds.fold[i] == test_fold)
      ds.split[i] = Split::Test;
    else if (ds.fold[i] == val_fold)
      ds.split[i] = Split::Val;
  }
}

std::map<std::string, std::vector<std::size_t>> build_kb_index(
    const std::vector<KbRecord>& kb, const SememeInventory& inventory) {
  std::map<std::string, std::vector<std::size_t>> index;
  for (const auto& rec : kb) {
    std::vector<std::size_t> ids;
    for (const auto& name : rec.sememes) {
      auto it = inventory.ids.find(name);
      if (it != inventory.ids.end()) ids.push_back(it->second);
    }
    if (ids.empty()) continue;
    std::sort(ids.begin(), ids.end());
    index[rec.word] = std::move(ids);
  }
  return index;
}

namespace {
const char* split_name(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  return "?";
}
}  // namespace

std::string manifest_to_text(const Dataset& ds) {
  if (ds.split.size() != ds.entries.size())
    throw std::runtime_error("manifest_to_text: dataset has no split tags");
  std::ostringstream out;
  for (std::size_t i = 0; i < ds.entries.size(); ++i) {
    out << ds.entries[i].word << '\t' << split_name(ds.split[i]) << '\t';
    if (ds.fold[i] == kNoFold)
      out << '-';
    else
      out << ds.fold[i];
    out << '\n';
  }
  return out.str();
}

void apply_manifest(Dataset& ds, const std::string& manifest_text) {
  std::map<std::string, std::pair<Split, std::size_t>> tags;
  std::size_t line_no = 0;
  for (const auto& raw : split_char(manifest_text, '\n')) {
    ++line_no;
    auto line = trim(raw);
    if (line.empty()) continue;
    auto cols = split_char(std::string(line), '\t');
    if (cols.size() != 3)
      throw std::runtime_error("manifest:" + std::to_string(line_no) + ": need 3 columns");
    Split s;
    if (cols[1] == "train")
      s = Split::Train;
    else if (cols[1] == "val")
      s = Split::Val;
    else if (cols[1] == "test")
      s = Split::Test;
    else
      throw std::runtime_error("manifest:" + std::to_string(line_no) + ": bad split tag '" +
                               cols[1] + "'");
    std::size_t fold = kNoFold;
    if (cols[2] != "-") {
      std::uint64_t f = 0;
      if (!parse_u64(cols[2], f))
        throw std::runtime_error("manifest:" + std::to_string(line_no) + ": bad fold");
      fold = static_cast<std::size_t>(f);
    }
    tags[cols[0]] = {s, fold};
  }
  if (tags.size() != ds.entries.size())
    throw std::runtime_error("manifest: entry count " + std::to_string(tags.size()) +
                             " does not match dataset size " +
                             std::to_string(ds.entries.size()));
  ds.split.assign(ds.entries.size(), Split::Train);
  ds.fold.assign(ds.entries.size(), kNoFold);
  for (std::size_t i = 0; i < ds.entries.size(); ++i) {
    auto it = tags.find(ds.entries[i].word);
    if (it == tags.end())
      throw std::runtime_error("manifest: dataset word '" + ds.entries[i].word +
                               "' missing from manifest");
    ds.split[i] = it->second.first;
    ds.fold[i] = it->second.second;
  }
}

std::string inventory_to_text(const SememeInventory& inv) {
  std::ostringstream out;
  for (std::size_t id = 0; id < inv.size(); ++id)
    out << id << '\t' << inv.names[id] << '\t' << inv.counts[id] << '\n';
  return out.str();
}

SememeInventory inventory_from_text(const std::string& text) {
  SememeInventory inv;
  std::size_t line_no = 0;
  for (const auto& raw : split_char(text, '\n')) {
    ++line_no;
    auto line = trim(raw);
    if (line.empty()) continue;
    auto cols = split_char(std::string(line), '\t');
    if (cols.size() != 3)
      throw std::runtime_error("inventory:" + std::to_string(line_no) + ": need 3 columns");
    std::uint64_t id = 0, count = 0;
    if (!parse_u64(cols[0], id) || !parse_u64(cols[2], count))
      throw std::runtime_error("inventory:" + std::to_string(line_no) + ": bad numbers");
    if (id != inv.names.size())
      throw std::runtime_error("inventory:" + std::to_string(line_no) + ": ids not contiguous");
    inv.names.push_back(cols[1]);
    inv.counts.push_back(count);
    inv.ids[cols[1]] = static_cast<std::size_t>(id);
  }
  if (inv.names.empty()) throw std::runtime_error("inventory: empty");
  return inv;
}

}  // namespace scorp
