#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ssrank/param_store.hpp"

namespace ssrank::harness {

struct CheckpointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CheckpointCorruptError : CheckpointError {
  using CheckpointError::CheckpointError;
};
struct CheckpointVersionError : CheckpointError {
  using CheckpointError::CheckpointError;
};
struct CheckpointHashError : CheckpointError {
  using CheckpointError::CheckpointError;
};

// Versioned binary container: magic string, format version, config
// hash, session counter, named strings (config text, rng states), then
// length-prefixed named float64 arrays. Byte layout documented in
// docs/checkpoint_format.md.
struct Checkpoint {
  static constexpr char kMagic[9] = "SRNKCKPT";
  static constexpr std::uint32_t kVersion = 1;

  std::uint64_t config_hash = 0;
  std::int64_t session_counter = 0;
  std::vector<std::pair<std::string, std::string>> strings;
  ParamStore params;

  void put_string(const std::string& name, std::string value);
  const std::string& get_string(const std::string& name) const;

  void save(const std::string& path) const;
  static Checkpoint load(const std::string& path);

  std::vector<std::uint8_t> serialize() const;
  static Checkpoint deserialize(const std::vector<std::uint8_t>& bytes);
};

}  // namespace ssrank::harness
