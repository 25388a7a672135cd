#include "lingdyn/calibration.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lingdyn::calibration {

SigmaInterval sigma_interval(const DemographicRecord& record,
                             const std::set<std::string>& l2_pool,
                             double low_fraction) {
  if (record.counts.empty())
    throw std::invalid_argument("sigma_interval: record has no groups");
  if (low_fraction < 0.0 || low_fraction > 1.0)
    throw std::invalid_argument("sigma_interval: low_fraction must lie in [0,1]");
  long long pool = 0, total = 0;
  for (const auto& [group, count] : record.counts) {
    if (count < 0)
      throw std::invalid_argument("sigma_interval: negative count for " + group);
    total += count;
    if (l2_pool.count(group)) pool += count;
  }
  if (total == 0) throw std::invalid_argument("sigma_interval: empty population");
  const double high = static_cast<double>(pool) / static_cast<double>(total);
  return {low_fraction * high, high};
}

std::pair<long long, long long> split_pooled(long long pooled_count, double ratio) {
  if (pooled_count < 0)
    throw std::invalid_argument("split_pooled: pooled_count must be >= 0");
  if (ratio < 0.0 || ratio > 1.0)
    throw std::invalid_argument("split_pooled: ratio must lie in [0,1]");
  const long long major =
      static_cast<long long>(std::floor(ratio * static_cast<double>(pooled_count) + 0.5));
  return {major, pooled_count - major};
}

double required_imports(double net_growth, double natural_growth) {
  return net_growth - natural_growth;
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

PoolSpec read_pool_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open pool spec: " + path.string());
  PoolSpec spec;
  std::string line, section;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      continue;
    }
    if (section == "l2_pool") {
      spec.l2_pool.insert(line);
    } else if (section == "pooled") {
      // "Group A+Group B,ratio"
      const auto comma = line.find_last_of(',');
      const auto plus = line.find('+');
      if (comma == std::string::npos || plus == std::string::npos || plus > comma)
        throw std::runtime_error("malformed [pooled] line: " + line);
      const std::string name = trim(line.substr(0, comma));
      spec.pooled.emplace_back(name, trim(name.substr(0, name.find('+'))),
                               trim(name.substr(name.find('+') + 1)),
                               std::stod(line.substr(comma + 1)));
    } else {
      throw std::runtime_error("pool spec line outside any section: " + line);
    }
  }
  return spec;
}

std::vector<DemographicRecord> read_demographics_csv(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open demographics CSV: " + path.string());
  std::string line;
  if (!std::getline(in, line) || trim(line) != "year,group,count")
    throw std::runtime_error("demographics CSV must start with header year,group,count");
  std::vector<DemographicRecord> records;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find_last_of(',');
    if (c1 == std::string::npos || c2 == c1)
      throw std::runtime_error("malformed demographics row: " + line);
    const int year = std::stoi(line.substr(0, c1));
    const std::string group = trim(line.substr(c1 + 1, c2 - c1 - 1));
    const long long count = std::stoll(line.substr(c2 + 1));
    if (records.empty() || records.back().year != year)
      records.push_back({year, {}});
    records.back().counts.emplace_back(group, count);
  }
  return records;
}

std::vector<DemographicRecord> apply_pooled_splits(
    std::vector<DemographicRecord> records, const PoolSpec& spec) {
  for (auto& record : records) {
    for (const auto& [name, first, second, ratio] : spec.pooled) {
      for (auto it = record.counts.begin(); it != record.counts.end(); ++it) {
        if (it->first == name) {
          const auto [major, minor] = split_pooled(it->second, ratio);
          it->first = first;
          it->second = major;
          record.counts.insert(it + 1, {second, minor});
          break;
        }
      }
    }
  }
  return records;
}

std::vector<SigmaInterval> sigma_intervals(
    const std::vector<DemographicRecord>& records, const PoolSpec& spec,
    double low_fraction) {
  std::vector<SigmaInterval> out;
  out.reserve(records.size());
  for (const auto& record : records)
    out.push_back(sigma_interval(record, spec.l2_pool, low_fraction));
  return out;
}

std::vector<CasePreset> case_presets(const std::filesystem::path& data_dir) {
  auto intervals_for = [&](const std::string& stem) {
    const PoolSpec spec = read_pool_spec(data_dir / (stem + "_pool.txt"));
    const auto records = apply_pooled_splits(
        read_demographics_csv(data_dir / (stem + ".csv")), spec);
    std::vector<std::pair<int, SigmaInterval>> out;
    for (const auto& record : records)
      out.emplace_back(record.year, sigma_interval(record, spec.l2_pool));
    return out;
  };

  std::vector<CasePreset> presets;
  presets.push_back(
      {"afrikaans", environment::GrammarAdvantages(1.0, 1.0), intervals_for("cape"),
       "equiadvantageous grammars; D = d"});
  presets.push_back({"afro_peruvian", environment::GrammarAdvantages(0.7, 0.05),
                     intervals_for("lima"),
                     "null-subject grammar advantage ratio 14"});
  return presets;
}

}  // namespace lingdyn::calibration
