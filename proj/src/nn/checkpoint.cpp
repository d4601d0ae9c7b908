#include "pal/nn/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace pal::nn {

namespace {
constexpr char kMagic[8] = {'P', 'A', 'L', 'C', 'K', 'P', 'T', '1'};
}

const VecX& Checkpoint::get(const std::string& name) const {
  auto it = arrays_.find(name);
  if (it == arrays_.end())
    throw std::runtime_error("checkpoint: missing array " + name);
  return it->second;
}

const std::string& Checkpoint::get_meta(const std::string& key) const {
  auto it = meta_.find(key);
  if (it == meta_.end())
    throw std::runtime_error("checkpoint: missing meta " + key);
  return it->second;
}

void Checkpoint::save(const std::string& path) const {
  nlohmann::json header;
  header["meta"] = meta_;
  int64_t offset = 0;
  for (const auto& [name, values] : arrays_) {
    header["arrays"][name] = {{"offset", offset}, {"count", values.size()}};
    offset += values.size();
  }
  const std::string header_str = header.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("checkpoint: cannot open " + path);
  out.write(kMagic, sizeof(kMagic));
  const uint64_t hlen = header_str.size();
  out.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
  out.write(header_str.data(), static_cast<std::streamsize>(hlen));
  for (const auto& [name, values] : arrays_)
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!out) throw std::runtime_error("checkpoint: write failed " + path);
}

Checkpoint Checkpoint::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("checkpoint: bad magic in " + path);
  uint64_t hlen = 0;
  in.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
  std::string header_str(hlen, '\0');
  in.read(header_str.data(), static_cast<std::streamsize>(hlen));
  const nlohmann::json header = nlohmann::json::parse(header_str);

  Checkpoint ckpt;
  if (header.contains("meta"))
    ckpt.meta_ = header["meta"].get<std::map<std::string, std::string>>();
  if (header.contains("arrays")) {
    for (auto it = header["arrays"].begin(); it != header["arrays"].end(); ++it) {
      const int64_t count = (*it)["count"].get<int64_t>();
      VecX values(count);
      in.read(reinterpret_cast<char*>(values.data()),
              static_cast<std::streamsize>(count * sizeof(double)));
      ckpt.arrays_[it.key()] = std::move(values);
    }
  }
  if (!in) throw std::runtime_error("checkpoint: truncated file " + path);
  return ckpt;
}

}  // namespace pal::nn
