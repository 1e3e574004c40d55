#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "saff/fairness_metrics.hpp"

namespace fixture {

// Age-group record: privileged means age <= 50 under the standard groups.
inline saff::MatchRecord record(int y, int yhat, bool privileged, int index = 0) {
  saff::MatchRecord r;
  r.recipient_id = "R" + std::to_string(index);
  r.recipient_age = privileged ? 30 : 60;
  r.arp_probability = yhat ? 0.75 : 0.25;
  r.surgeon_decision = y;
  r.epts = 40.0;
  r.distance = 100.0;
  return r;
}

inline std::vector<saff::MatchRecord> records(const std::vector<oracle::Outcome>& os) {
  std::vector<saff::MatchRecord> out;
  for (std::size_t i = 0; i < os.size(); ++i)
    out.push_back(record(os[i].y, os[i].yhat, os[i].privileged, static_cast<int>(i)));
  return out;
}

inline saff::DataTuple tuple(const std::string& id, const std::vector<oracle::Outcome>& os) {
  saff::DataTuple t;
  t.tuple_id = id;
  t.donor.donor_id = "D-" + id;
  t.donor.donor_age = 40;
  t.donor.kdpi = 50.0;
  t.records = records(os);
  return t;
}

inline std::vector<oracle::Outcome> random_outcomes(std::mt19937_64& g, std::size_t max_size) {
  std::uniform_int_distribution<std::size_t> size(1, max_size);
  std::bernoulli_distribution coin(0.5);
  std::vector<oracle::Outcome> os(size(g));
  for (auto& o : os) o = {coin(g) ? 1 : 0, coin(g) ? 1 : 0, coin(g)};
  return os;
}

inline std::filesystem::path data_dir() {
  if (const char* d = std::getenv("SAFF_DATA_DIR")) return d;
  return "tests/data";
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("saff_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace fixture
