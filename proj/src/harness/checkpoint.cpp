#include "ssrank/harness/checkpoint.hpp"

#include <cstring>
#include <fstream>

namespace ssrank::harness {

namespace {

void write_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xff);
}

void write_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back((v >> (8 * i)) & 0xff);
}

void write_f64(std::vector<std::uint8_t>& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  write_u64(out, bits);
}

void write_string(std::vector<std::uint8_t>& out, const std::string& s) {
  write_u32(out, static_cast<std::uint32_t>(s.size()));
  out.insert(out.end(), s.begin(), s.end());
}

struct Reader {
  const std::vector<std::uint8_t>& bytes;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (pos + n > bytes.size()) {
      throw CheckpointCorruptError("checkpoint: truncated file");
    }
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(bytes[pos + i]) << (8 * i);
    pos += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(bytes[pos + i]) << (8 * i);
    pos += 8;
    return v;
  }
  double f64() {
    const std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
  }
  std::string str() {
    const std::uint32_t n = u32();
    need(n);
    std::string s(bytes.begin() + pos, bytes.begin() + pos + n);
    pos += n;
    return s;
  }
};

}  // namespace

void Checkpoint::put_string(const std::string& name, std::string value) {
  for (auto& e : strings) {
    if (e.first == name) {
      throw std::invalid_argument("checkpoint: duplicate string " + name);
    }
  }
  strings.emplace_back(name, std::move(value));
}

const std::string& Checkpoint::get_string(const std::string& name) const {
  for (const auto& e : strings) {
    if (e.first == name) return e.second;
  }
  throw CheckpointCorruptError("checkpoint: missing string " + name);
}

std::vector<std::uint8_t> Checkpoint::serialize() const {
  std::vector<std::uint8_t> out;
  out.insert(out.end(), kMagic, kMagic + 8);
  write_u32(out, kVersion);
  write_u64(out, config_hash);
  write_u64(out, static_cast<std::uint64_t>(session_counter));
  write_u32(out, static_cast<std::uint32_t>(strings.size()));
  for (const auto& [name, value] : strings) {
    write_string(out, name);
    write_string(out, value);
  }
  write_u32(out, static_cast<std::uint32_t>(params.entries().size()));
  for (const auto& [name, values] : params.entries()) {
    write_string(out, name);
    write_u64(out, values.size());
    for (double v : values) write_f64(out, v);
  }
  return out;
}

Checkpoint Checkpoint::deserialize(const std::vector<std::uint8_t>& bytes) {
  Reader reader{bytes};
  reader.need(8);
  if (std::memcmp(bytes.data(), kMagic, 8) != 0) {
    throw CheckpointCorruptError("checkpoint: bad magic");
  }
  reader.pos = 8;
  const std::uint32_t version = reader.u32();
  if (version != kVersion) {
    throw CheckpointVersionError("checkpoint: unsupported format version " +
                                 std::to_string(version));
  }
  Checkpoint ckpt;
  ckpt.config_hash = reader.u64();
  ckpt.session_counter = static_cast<std::int64_t>(reader.u64());
  const std::uint32_t n_strings = reader.u32();
  for (std::uint32_t i = 0; i < n_strings; ++i) {
    std::string name = reader.str();
    std::string value = reader.str();
    ckpt.strings.emplace_back(std::move(name), std::move(value));
  }
  const std::uint32_t n_arrays = reader.u32();
  for (std::uint32_t i = 0; i < n_arrays; ++i) {
    std::string name = reader.str();
    const std::uint64_t count = reader.u64();
    if (count > (bytes.size() - reader.pos) / 8) {
      throw CheckpointCorruptError("checkpoint: array length overruns file");
    }
    std::vector<double> values(count);
    for (std::uint64_t j = 0; j < count; ++j) values[j] = reader.f64();
    ckpt.params.put(name, std::move(values));
  }
  if (reader.pos != bytes.size()) {
    throw CheckpointCorruptError("checkpoint: trailing bytes");
  }
  return ckpt;
}

void Checkpoint::save(const std::string& path) const {
  const std::vector<std::uint8_t> bytes = serialize();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("checkpoint: cannot open " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw CheckpointError("checkpoint: write failed for " + path);
}

Checkpoint Checkpoint::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("checkpoint: cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

}  // namespace ssrank::harness
