#include "commands.hpp"

#include <sketchpress/sketchpress.hpp>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

namespace sketchpress::cli {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json sketch_json(const SketchSpec& s) {
  json j{{"kind", to_string(s.kind)}, {"n", s.n}, {"n_c", s.n_c}, {"coarsening_factor", static_cast<double>(s.n) / static_cast<double>(s.n_c)}};
  if (s.kind == SketchKind::NearestNeighbor) {
    j["half_width"] = s.d;
    j["weights"] = s.weights;
  }
  if (s.kind == SketchKind::GaussianDense || s.ell) j["seed"] = s.seed;
  j["projection"] = s.ell ? json(*s.ell) : json(nullptr);
  return j;
}

json codec_json(const FactorCodecParams& p) {
  json j{{"mode", to_string(p.mode)}, {"deflate", p.stage == LosslessStage::Deflate}};
  if (p.mode == CodecMode::FixedPoint) j["bits"] = p.bits;
  return j;
}

json archive_json(const Archive& a) {
  const auto& cfg = a.config;
  json j{{"algorithm", to_string(cfg.algorithm)},
         {"m", a.m},
         {"n", a.n},
         {"k", cfg.k},
         {"power", cfg.q},
         {"reorth", cfg.reorth},
         {"sketch", sketch_json(cfg.sketch)},
         {"codec", codec_json(a.B().params)},
         {"original_bytes", a.original_bytes},
         {"compressed_bytes", a.compressed_bytes()},
         {"cf", spatio_temporal_cf(a)},
         {"temporal_cf", temporal_cf(a.m, a.n, cfg.k)},
         {"factor_epsilon", {a.B().epsilon, a.C().epsilon}}};
  if (cfg.r) j["lift_rank"] = *cfg.r;
  if (cfg.q > 0) j["column_stride"] = cfg.column_stride;
  if (cfg.algorithm == Algorithm::SpcId || cfg.algorithm == Algorithm::TpcId) j["id_target"] = to_string(cfg.id_target);
  return j;
}

void report_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

// One extra, explicitly counted pass: true relative error of the archive and
// the Eckart-Young optimum. Holds A_f in memory, so desk scale only.
json verification_pass(SnapshotStream& stream, const Archive& archive) {
  const Matrix b = decode_factor(archive.B());
  const Matrix c = decode_factor(archive.C());
  const std::size_t before = stream.passes_completed();
  Matrix a(stream.rows(), stream.cols());
  for_each_block(stream, archive.config.block_rows,
                 [&](const RowBlock& blk, Index first) { a.middleRows(first, blk.rows()) = blk; });
  const double rel = rel_frob_error(a, b * c);
  const double oracle_rel = oracle_error(a, archive.config.k) / a.norm();
  return json{{"passes", stream.passes_completed() - before},
              {"rel_frob", rel},
              {"oracle_rel_frob", oracle_rel},
              {"mreo", oracle_rel > 0.0 ? json(rel / oracle_rel) : json(nullptr)}};
}

}  // namespace

unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SKETCHPRESS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) throw ConfigError("SKETCHPRESS_THREADS must be a positive integer");
    hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
  }
  return hw;
}

json cmd_compress(const RunOptions& opt, bool timing) {
  SnapshotStream stream = SnapshotStream::open(opt.input);
  const AlgorithmConfig cfg = make_algorithm_config(opt, stream.cols());
  const FactorCodecParams codec = make_codec(opt);

  const auto t0 = Clock::now();
  CompressOutcome out = compress_dataset(stream, cfg, codec);
  const double elapsed = seconds_since(t0);
  write_archive(opt.output, out.archive);
  report_warnings(out.warnings);

  json j = archive_json(out.archive);
  j["command"] = "compress";
  j["output"] = opt.output;
  j["passes"] = out.passes;
  j["expected_passes"] = cfg.expected_passes();
  j["warnings"] = out.warnings;
  if (timing) j["wall_seconds"] = elapsed;
  if (opt.verify) j["verification"] = verification_pass(stream, out.archive);
  return j;
}

json cmd_decompress(const std::string& input, const std::string& output, Index block_rows) {
  const Archive a = read_archive(input);
  decompress_to_file(a, output, block_rows);
  return json{{"command", "decompress"}, {"output", output}, {"m", a.m}, {"n", a.n}, {"k", a.config.k}};
}

json cmd_inspect(const std::string& input) {
  json j = archive_json(read_archive(input));
  j["command"] = "inspect";
  return j;
}

json cmd_estimate_error(const EstimateOptions& opt) {
  SnapshotStream stream = SnapshotStream::open(opt.run.input);
  RunOptions base = opt.run;
  if (const auto plus = base.sketch.find('+'); plus != std::string::npos) base.sketch.resize(plus);
  const SketchOperator op(make_sketch_spec(base, stream.cols(), opt.run.rank));
  const Index m_c = opt.m_c.value_or(stream.rows());
  const TauSweep sweep = spc_id_err(stream, op, m_c, std::nullopt, opt.run.block_rows);
  std::size_t passes = stream.passes_completed();

  std::vector<double> exact;
  if (opt.exact) {
    Matrix a_f(stream.rows(), stream.cols());
    Matrix a_c(stream.rows(), op.output_dim());
    for_each_block(stream, opt.run.block_rows, [&](const RowBlock& blk, Index first) {
      a_f.middleRows(first, blk.rows()) = blk;
      a_c.middleRows(first, blk.rows()) = op.apply(blk);
    });
    exact = epsilon_sweep(a_f, a_c, sweep.tau).epsilon;
  }

  if (!opt.csv.empty()) {
    std::ofstream csv(opt.csv);
    if (!csv) throw IoError("cannot create " + opt.csv);
    csv << (opt.exact ? "tau,epsilon_hat,epsilon\n" : "tau,epsilon_hat\n");
    for (std::size_t i = 0; i < sweep.tau.size(); ++i) {
      csv << fmt(sweep.tau[i]) << ',' << fmt(sweep.epsilon[i]);
      if (opt.exact) csv << ',' << fmt(exact[i]);
      csv << '\n';
    }
    if (!csv) throw IoError("write failure on " + opt.csv);
  }

  json j{{"command", "estimate-error"},
         {"sketch", sketch_json(op.spec())},
         {"m", stream.rows()},
         {"m_c", m_c},
         {"sample_stride", sweep.sample_stride},
         {"tau", sweep.tau},
         {"epsilon_hat", sweep.epsilon},
         {"best_tau", sweep.best_tau()},
         {"best_epsilon_hat", sweep.best_epsilon()},
         {"passes", passes}};
  if (opt.exact) {
    j["epsilon"] = exact;
    j["verification_passes"] = stream.passes_completed() - passes;
  }
  return j;
}

json cmd_gen_data(const GenOptions& opt) {
  const ScalarKind kind = opt.f32 ? ScalarKind::f32 : ScalarKind::f64;
  json j{{"command", "gen-data"}, {"kind", opt.kind}, {"output", opt.output}, {"seed", opt.seed}};
  if (opt.kind == "spectrum") {
    SpectrumSpec spec;
    spec.m = opt.m;
    spec.n = opt.n;
    spec.decay = parse_decay_kind(opt.decay);
    spec.rate = opt.rate;
    spec.alpha = opt.alpha;
    spec.rank = opt.rank;
    spec.seed = opt.seed;
    gen_spectrum(spec, opt.output, kind);
    j["m"] = spec.m;
    j["n"] = spec.n;
    j["decay"] = to_string(spec.decay);
  } else if (opt.kind == "heat2d") {
    Heat2dSpec spec;
    spec.grid = opt.grid;
    spec.steps = opt.steps;
    spec.diffusivity = opt.diffusivity;
    spec.dt = opt.dt;
    spec.modes = opt.modes;
    spec.seed = opt.seed;
    gen_heat2d(spec, opt.output, kind);
    j["m"] = spec.steps;
    j["n"] = spec.grid * spec.grid;
  } else {
    throw ConfigError("unknown generator '" + opt.kind + "' (expected spectrum or heat2d)");
  }
  return j;
}

json cmd_bench(const BenchOptions& opt) {
  if (opt.trials < 1) throw ConfigError("--trials must be >= 1");
  if (opt.rank_min < 1 || opt.rank_max < opt.rank_min) throw ConfigError("rank range must satisfy 1 <= min <= max");
  const RowBlock a = read_snapshot_file(opt.run.input);
  const Vector spectrum = singular_values(a);
  const double norm = a.norm();

  const auto ranks = static_cast<std::size_t>(opt.rank_max - opt.rank_min + 1);
  const auto trials = static_cast<std::size_t>(opt.trials);
  std::vector<AlgorithmConfig> configs;
  for (std::size_t r = 0; r < ranks; ++r) {
    RunOptions run = opt.run;
    run.rank = opt.rank_min + static_cast<Index>(r);
    configs.push_back(make_algorithm_config(run, a.cols()));
  }

  std::vector<double> errors(ranks * trials);
  std::vector<double> runtimes(ranks * trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&]() {
    for (std::size_t job = next++; job < errors.size() && !failed; job = next++) {
      try {
        AlgorithmConfig cfg = configs[job / trials];
        cfg.sketch.seed = opt.run.seed + job % trials;
        SnapshotStream stream = SnapshotStream::from_matrix(a);
        const auto t0 = Clock::now();
        const Factorization f = factorize(stream, cfg);
        runtimes[job] = seconds_since(t0);
        errors[job] = (Matrix(a) - f.B * f.C).norm() / norm;
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  const unsigned threads = std::min<unsigned>(worker_count(), static_cast<unsigned>(errors.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  json rows = json::array();
  std::string csv = "rank,mreo,mean_runtime,algorithm\n";
  for (std::size_t r = 0; r < ranks; ++r) {
    const Index k = opt.rank_min + static_cast<Index>(r);
    const std::span<const double> errs(errors.data() + r * trials, trials);
    const double oracle_rel = oracle_error_from_spectrum(spectrum, k) / norm;
    const MreoResult m = mreo(errs, oracle_rel);
    double mean_rt = 0.0;
    if (opt.timing) {
      for (std::size_t t = 0; t < trials; ++t) mean_rt += runtimes[r * trials + t];
      mean_rt /= static_cast<double>(trials);
    }
    if (m.below_oracle) std::cerr << "warning: rank " << k << " trial beat the Eckart-Young optimum\n";
    csv += std::to_string(k) + ',' + fmt(m.ratio) + ',' + fmt(mean_rt) + ',' + opt.run.algorithm + '\n';
    rows.push_back(json{{"rank", k}, {"mreo", m.ratio}, {"oracle_rel_frob", oracle_rel}, {"mean_runtime", mean_rt}});
  }
  if (!opt.csv.empty()) {
    std::ofstream out(opt.csv, std::ios::binary);
    if (!out) throw IoError("cannot create " + opt.csv);
    out << csv;
    if (!out) throw IoError("write failure on " + opt.csv);
  }
  return json{{"command", "bench"}, {"algorithm", opt.run.algorithm}, {"trials", opt.trials},
              {"threads", threads}, {"results", rows}};
}

}  // namespace sketchpress::cli
