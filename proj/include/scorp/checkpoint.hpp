#pragma once

#include <string>
#include <utility>
#include <vector>

#include "scorp/tensor.hpp"

namespace scorp {

// Self-describing container of named f64 arrays plus a free-form UTF-8 meta
// block, all little-endian on disk:
//
//   magic "SCPT" | u32 version | u64 count
//   per array: u32 name_len | name | u32 rank | u64 dims[rank] | f64 data[...]
//   u64 meta_len | meta bytes
struct ArrayStore {
  std::vector<std::pair<std::string, Tensor>> arrays;
  std::string meta;

  const Tensor* find(const std::string& name) const;
  bool has(const std::string& name) const { return find(name) != nullptr; }
};

void save_array_store(const ArrayStore& store, const std::string& path);
ArrayStore load_array_store(const std::string& path);

}  // namespace scorp
