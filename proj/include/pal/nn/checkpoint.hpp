#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pal/types.hpp"

namespace pal::nn {

// Named double arrays plus string metadata, stored as a JSON header followed
// by raw little-endian doubles. Round-trips bit-exactly.
class Checkpoint {
 public:
  void put(const std::string& name, const VecX& values) { arrays_[name] = values; }
  void put_meta(const std::string& key, const std::string& value) {
    meta_[key] = value;
  }

  const VecX& get(const std::string& name) const;
  bool has(const std::string& name) const { return arrays_.count(name) > 0; }
  const std::string& get_meta(const std::string& key) const;
  bool has_meta(const std::string& key) const { return meta_.count(key) > 0; }

  const std::map<std::string, VecX>& arrays() const { return arrays_; }
  const std::map<std::string, std::string>& meta() const { return meta_; }

  void save(const std::string& path) const;
  static Checkpoint load(const std::string& path);

 private:
  std::map<std::string, VecX> arrays_;
  std::map<std::string, std::string> meta_;
};

}  // namespace pal::nn
