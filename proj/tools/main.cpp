#include "commands.hpp"

#include <sketchpress/error.hpp>

#include <CLI11.hpp>

#include <iostream>

using namespace sketchpress;
using namespace sketchpress::cli;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;

void add_sketch_flags(CLI::App* cmd, RunOptions& opt) {
  cmd->add_option("-i,--input", opt.input, "Snapshot file (.lrsm)")->required();
  cmd->add_option("--sketch", opt.sketch, "di, nn, ga or gaussian; append +gauss for a Gaussian projection")
      ->capture_default_str();
  cmd->add_option("--coarsen", opt.coarsen, "Coarsening factor n/n_c")->capture_default_str();
  cmd->add_option("--nn-width", opt.nn_width, "Nearest-neighbour half width d")->capture_default_str();
  cmd->add_option("--seed", opt.seed, "Seed for every random draw")->capture_default_str();
  cmd->add_option("--block-rows", opt.block_rows, "Rows per streamed block")->capture_default_str();
}

void add_algorithm_flags(CLI::App* cmd, RunOptions& opt) {
  cmd->add_option("--algorithm", opt.algorithm, "spc-svd, tpc-svd, spc-id, tpc-id or proto-tpc")
      ->capture_default_str();
  cmd->add_option("--oversample", opt.oversample, "Extra projection columns p (ell = k + p)")->capture_default_str();
  cmd->add_option("--lift-rank", opt.lift_rank, "Lifting rank r for spc-id (default min(2k, rank))");
  cmd->add_option("--power", opt.power, "C-PWR power iterations q")->capture_default_str();
  cmd->add_flag("--reorth", opt.reorth, "Re-orthonormalise between power steps (two-pass only)");
  cmd->add_option("--stride", opt.stride, "Column stride for the C-PWR column set")->capture_default_str();
  cmd->add_option("--id-target", opt.id_target, "coarse or leading-basis")->capture_default_str();
}

void add_codec_flags(CLI::App* cmd, RunOptions& opt) {
  cmd->add_option("--codec", opt.codec, "lossless or fixed")->capture_default_str();
  cmd->add_option("--bits", opt.bits, "Magnitude bits per entry for the fixed codec")->capture_default_str();
  cmd->add_flag("--deflate", opt.deflate, "Deflate each factor blob");
}

void emit(const nlohmann::json& j) { std::cout << j.dump(2) << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sketch-based low-rank compression of snapshot matrices"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "sketchpress 0.1.0");

  RunOptions compress_opt;
  bool no_timing = false;
  auto* compress = app.add_subcommand("compress", "Factor a snapshot file into a compressed archive");
  add_sketch_flags(compress, compress_opt);
  add_algorithm_flags(compress, compress_opt);
  add_codec_flags(compress, compress_opt);
  compress->add_option("-o,--output", compress_opt.output, "Archive path (.lrsa)")->required();
  compress->add_option("-k,--rank", compress_opt.rank, "Target rank k")->capture_default_str();
  compress->add_flag("--verify", compress_opt.verify, "Extra pass measuring the true error");
  compress->add_flag("--no-timing", no_timing, "Omit wall-clock fields");

  std::string archive_in, decompress_out;
  Index decompress_rows = kDefaultBlockRows;
  auto* decompress = app.add_subcommand("decompress", "Rebuild a snapshot file from an archive");
  decompress->add_option("-i,--input", archive_in, "Archive path")->required();
  decompress->add_option("-o,--output", decompress_out, "Snapshot path")->required();
  decompress->add_option("--block-rows", decompress_rows, "Rows per written block")->capture_default_str();

  std::string inspect_in;
  auto* inspect = app.add_subcommand("inspect", "Print archive metadata");
  inspect->add_option("-i,--input", inspect_in, "Archive path")->required();

  EstimateOptions est;
  auto* estimate = app.add_subcommand("estimate-error", "Single-pass estimate of eps(tau) over a tau grid");
  add_sketch_flags(estimate, est.run);
  estimate->add_option("--mc", est.m_c, "Sampled row count m_c (default m)");
  estimate->add_option("-o,--csv", est.csv, "Write tau,epsilon rows here");
  estimate->add_flag("--exact", est.exact, "Extra pass computing the exact eps(tau)");

  GenOptions gen;
  auto* gendata = app.add_subcommand("gen-data", "Write a synthetic snapshot file");
  gendata->add_option("--kind", gen.kind, "spectrum or heat2d")->capture_default_str();
  gendata->add_option("-o,--output", gen.output, "Snapshot path")->required();
  gendata->add_option("--m", gen.m, "Rows (spectrum)")->capture_default_str();
  gendata->add_option("--n", gen.n, "Columns (spectrum)")->capture_default_str();
  gendata->add_option("--decay", gen.decay, "exponential, power or exact-rank")->capture_default_str();
  gendata->add_option("--rate", gen.rate, "Exponential decay rate")->capture_default_str();
  gendata->add_option("--alpha", gen.alpha, "Power-law exponent")->capture_default_str();
  gendata->add_option("--rank", gen.rank, "Rank for exact-rank spectra")->capture_default_str();
  gendata->add_option("--grid", gen.grid, "Heat grid points per side")->capture_default_str();
  gendata->add_option("--steps", gen.steps, "Heat time steps (rows)")->capture_default_str();
  gendata->add_option("--diffusivity", gen.diffusivity, "Heat diffusivity")->capture_default_str();
  gendata->add_option("--dt", gen.dt, "Heat time step")->capture_default_str();
  gendata->add_option("--modes", gen.modes, "Largest heat wavenumber")->capture_default_str();
  gendata->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  gendata->add_flag("--f32", gen.f32, "Store single precision");

  BenchOptions bench_opt;
  bool bench_no_timing = false;
  auto* bench = app.add_subcommand("bench", "MREO and runtime versus rank over seeded trials");
  add_sketch_flags(bench, bench_opt.run);
  add_algorithm_flags(bench, bench_opt.run);
  bench->add_option("--rank-min", bench_opt.rank_min, "Smallest rank")->capture_default_str();
  bench->add_option("--rank-max", bench_opt.rank_max, "Largest rank")->capture_default_str();
  bench->add_option("--trials", bench_opt.trials, "Trials per rank")->capture_default_str();
  bench->add_option("-o,--csv", bench_opt.csv, "CSV output (rank,mreo,mean_runtime,algorithm)");
  bench->add_flag("--no-timing", bench_no_timing, "Write 0 for runtimes so output is reproducible");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*compress) {
      emit(cmd_compress(compress_opt, !no_timing));
    } else if (*decompress) {
      emit(cmd_decompress(archive_in, decompress_out, decompress_rows));
    } else if (*inspect) {
      emit(cmd_inspect(inspect_in));
    } else if (*estimate) {
      emit(cmd_estimate_error(est));
    } else if (*gendata) {
      emit(cmd_gen_data(gen));
    } else if (*bench) {
      bench_opt.timing = !bench_no_timing;
      emit(cmd_bench(bench_opt));
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
