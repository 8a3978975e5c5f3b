#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace rwi::acc {

struct Criterion {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  nlohmann::json details;
};

struct Options {
  std::uint64_t seed = 20250801;
  bool parallel = true;
  // Sample counts; the defaults are the contract values.
  std::size_t soup_samples = 100000;
  std::size_t mc_samples = 100000;
  std::size_t backward_attempts = 100000;
  int decomposition_soups = 100;
};

std::vector<Criterion> run_all(const Options& opts);
std::vector<Criterion> run_selected(const Options& opts, const std::vector<int>& ids);

nlohmann::json criteria_json(const std::vector<Criterion>& rows);

}  // namespace rwi::acc
