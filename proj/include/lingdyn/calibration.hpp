#ifndef LINGDYN_CALIBRATION_HPP
#define LINGDYN_CALIBRATION_HPP

#include <filesystem>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "lingdyn/environment.hpp"

// Demographic ingestion and the case-study parameter presets.

namespace lingdyn::calibration {

// Census-style counts for one year. Group names may denote pooled columns
// (e.g. "Black+Mixed AfE"); see split_pooled and the pool-mapping format.
struct DemographicRecord {
  int year;
  std::vector<std::pair<std::string, long long>> counts;
};

struct SigmaInterval {
  double low;
  double high;
};

struct CasePreset {
  std::string name;
  environment::GrammarAdvantages advantages;
  std::vector<std::pair<int, SigmaInterval>> sigma_intervals;
  std::string notes;
};

// high = pooled L2 counts over total population; low = low_fraction * high.
SigmaInterval sigma_interval(const DemographicRecord& record,
                             const std::set<std::string>& l2_pool,
                             double low_fraction = 0.5);

// Split a pooled count into (major, minor) by the given ratio, major
// rounded half-up, total conserved.
std::pair<long long, long long> split_pooled(long long pooled_count,
                                             double ratio = 0.92);

// Imports needed to reconcile observed net growth with natural growth.
double required_imports(double net_growth, double natural_growth);

// Pool-mapping file: group names under [l2_pool]; optional
// "[pooled]" entries of the form "Group A+Group B,ratio" instructing a
// ratio split of the combined column before pooling.
struct PoolSpec {
  std::set<std::string> l2_pool;
  // pooled column name -> (first part, second part, ratio)
  std::vector<std::tuple<std::string, std::string, std::string, double>> pooled;
};

PoolSpec read_pool_spec(const std::filesystem::path& path);

// CSV with header year,group,count; rows grouped into records by year.
std::vector<DemographicRecord> read_demographics_csv(
    const std::filesystem::path& path);

// Apply the ratio splits named in the spec to every record.
std::vector<DemographicRecord> apply_pooled_splits(
    std::vector<DemographicRecord> records, const PoolSpec& spec);

std::vector<SigmaInterval> sigma_intervals(
    const std::vector<DemographicRecord>& records, const PoolSpec& spec,
    double low_fraction = 0.5);

// The two bundled case studies, computed from the data directory.
std::vector<CasePreset> case_presets(const std::filesystem::path& data_dir);

}  // namespace lingdyn::calibration

#endif
