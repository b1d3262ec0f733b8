#pragma once

#include "run_options.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace sketchpress::cli {

nlohmann::json cmd_compress(const RunOptions& opt, bool timing);
nlohmann::json cmd_decompress(const std::string& input, const std::string& output, Index block_rows);
nlohmann::json cmd_inspect(const std::string& input);

struct EstimateOptions {
  RunOptions run;
  std::optional<Index> m_c;  // default m
  std::string csv;
  bool exact = false;  // extra pass: materialise A_f and report the exact eps(tau)
};
nlohmann::json cmd_estimate_error(const EstimateOptions& opt);

nlohmann::json cmd_gen_data(const GenOptions& opt);

struct BenchOptions {
  RunOptions run;
  Index rank_min = 1;
  Index rank_max = 10;
  Index trials = 100;
  std::string csv;
  bool timing = true;
};
nlohmann::json cmd_bench(const BenchOptions& opt);

/// Worker count from SKETCHPRESS_THREADS, else the hardware concurrency.
unsigned worker_count();

}  // namespace sketchpress::cli
