#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ssrank {

// Flat named collection of float64 arrays shared by networks, env
// models and agents. Insertion order is preserved so serialized
// layouts are stable.
class ParamStore {
 public:
  void put(const std::string& name, std::vector<double> values) {
    if (contains(name)) {
      throw std::invalid_argument("ParamStore: duplicate name " + name);
    }
    entries_.emplace_back(name, std::move(values));
  }

  void put_scalar(const std::string& name, double value) {
    put(name, std::vector<double>{value});
  }

  bool contains(const std::string& name) const {
    for (const auto& e : entries_) {
      if (e.first == name) return true;
    }
    return false;
  }

  const std::vector<double>& get(const std::string& name) const {
    for (const auto& e : entries_) {
      if (e.first == name) return e.second;
    }
    throw std::out_of_range("ParamStore: missing name " + name);
  }

  double scalar(const std::string& name) const {
    const auto& v = get(name);
    if (v.size() != 1) {
      throw std::out_of_range("ParamStore: " + name + " is not a scalar");
    }
    return v[0];
  }

  const std::vector<std::pair<std::string, std::vector<double>>>& entries() const {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, std::vector<double>>> entries_;
};

}  // namespace ssrank
