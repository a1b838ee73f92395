// Copyright 2026 The detsamp Authors
// SPDX-License-Identifier: Apache-2.0

// detsamp: command-line driver for the samplers and experiments.
//
// Exit codes: 0 success, 2 input error, 3 numerical failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli_support.hpp"
#include "detsamp/dpp.hpp"
#include "detsamp/error.hpp"
#include "detsamp/experiments.hpp"
#include "detsamp/ffs.hpp"
#include "detsamp/linalg.hpp"
#include "detsamp/physics.hpp"
#include "detsamp/reference.hpp"

namespace {

using nlohmann::ordered_json;
using namespace detsamp;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

struct Common {
  std::uint64_t seed = 1;
  std::string out = "-";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  cmd->add_option("--out", c.out, "Output path, '-' for stdout")->capture_default_str();
}

ordered_json ledger_json(const FlopLedger& l) {
  return {{"mul", l.multiplies()}, {"add", l.additions()}};
}

ordered_json optional_json(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json one_based(const std::vector<std::size_t>& sites) {
  ordered_json a = ordered_json::array();
  for (auto s : sites) a.push_back(s + 1);
  return a;
}

std::string pretty(const ordered_json& j) { return j.dump(2) + "\n"; }

template <class T>
void require(bool ok, const T& message) {
  if (!ok) throw Error(ErrorCode::InvalidInput, message);
}

// --- sample ---------------------------------------------------------------------

struct SampleArgs {
  Common common;
  std::string orbitals;
  std::string algorithm = "ffs";
  std::size_t samples = 1;
  std::size_t burn_in = 1000;
  std::size_t thin = 1;
};

int run_sample(const SampleArgs& a) {
  const Algorithm alg = parse_algorithm(a.algorithm);
  require(a.thin >= 1, "--thin must be >= 1");
  const OrbitalMatrix u(load_matrix_csv(a.orbitals));

  RngStream rng(a.common.seed);
  FlopLedger ledger;
  std::ostringstream os;
  std::optional<SampleConfig> state;
  for (std::size_t i = 0; i < a.samples; ++i) {
    const FlopLedger before = ledger;
    SampleConfig config;
    switch (alg) {
      case Algorithm::Ffs: config = ffs_sample(u, rng, ledger); break;
      case Algorithm::Hkpv: config = hkpv_sample(u, rng, ledger); break;
      case Algorithm::Markov: {
        MarkovOptions opts;
        opts.burn_in = state ? 0 : a.burn_in;
        opts.keep = 1;
        opts.thin = a.thin;
        opts.initial = state;
        config = markov_sample_stream(u, {}, opts, rng, ledger).front();
        state = config;
        break;
      }
    }
    ordered_json line;
    line["positions"] = one_based(sorted_config(config));
    line["ledgerDelta"] = ledger_json(ledger.since(before));
    os << line.dump() << '\n';
  }
  cli::write_output(a.common.out, os.str());
  return kExitOk;
}

// --- orbitals -------------------------------------------------------------------

struct OrbitalArgs {
  Common common;
  std::size_t sites = 6;
  std::size_t particles = 3;
  std::string model;
};

int run_orbitals(const OrbitalArgs& a) {
  Matrix u;
  if (!a.model.empty()) {
    const ModelParams p = load_model_params(a.model);
    if (p.model == "double_well") {
      const std::size_t n = p.particles.value_or(4);
      u = ground_state_orbitals(build_double_well(to_double_well(p)), n).matrix();
    } else {
      RngStream rng(p.seed.value_or(a.common.seed));
      const std::size_t n = p.particles.value_or(p.n_up.value_or(4));
      u = ground_state_orbitals(build_anderson(to_anderson(p), rng), n).matrix();
    }
  } else {
    require(a.particles >= 1 && a.particles <= a.sites, "--particles must lie in [1, sites]");
    RngStream rng(a.common.seed);
    u = random_orthonormal(a.sites, a.particles, rng).matrix();
  }
  cli::write_output(a.common.out, matrix_to_csv(u));
  return kExitOk;
}

// --- bench-flops ----------------------------------------------------------------

struct BenchArgs {
  Common common;
  std::size_t sites = 1024;
  std::string particles = "1,2,4,8,16,32,64,128";
  std::string algorithms = "ffs,hkpv,markov";
};

std::vector<Algorithm> parse_algorithms(const std::string& text) {
  std::vector<Algorithm> out;
  for (const auto& name : cli::split_list(text)) out.push_back(parse_algorithm(name));
  require(!out.empty(), "--algorithms must not be empty");
  return out;
}

int run_bench(const BenchArgs& a) {
  const auto ns = cli::parse_count_list(a.particles, "--particles");
  const auto algs = parse_algorithms(a.algorithms);
  for (auto n : ns) require(n >= 1 && n <= a.sites, "every N must lie in [1, sites]");
  const auto rows = bench_flops(a.sites, ns, algs, a.common.seed);
  cli::write_output(a.common.out, bench_rows_to_csv(rows));
  return kExitOk;
}

// --- double-well ----------------------------------------------------------------

struct DoubleWellArgs {
  Common common;
  std::string model;
  std::string c;
  std::size_t sites = 64;
  double a = 4096.0;
  double b = 2.0;
  double t = DoubleWellParams{}.t;
  std::size_t particles = 4;
  std::size_t trials = 1000;
  std::size_t samples_per_trial = 100;
  std::size_t burn_in = 2000;
  std::size_t thin = 1;
  std::size_t acf_length = 10000;
  std::string algorithms = "ffs,markov";
};

int run_double_well_cmd(const DoubleWellArgs& a, const CLI::App& cmd) {
  DoubleWellOptions o;
  o.model.sites = a.sites;
  o.model.a = a.a;
  o.model.b = a.b;
  o.model.t = a.t;
  o.particles = a.particles;
  o.seed = a.common.seed;
  std::optional<double> model_c;
  if (!a.model.empty()) {
    const ModelParams p = load_model_params(a.model);
    const DoubleWellParams m = to_double_well(p);
    if (!cmd.count("--sites")) o.model.sites = m.sites;
    if (!cmd.count("--a")) o.model.a = m.a;
    if (!cmd.count("--b")) o.model.b = m.b;
    if (!cmd.count("--t")) o.model.t = m.t;
    if (!cmd.count("--particles") && p.particles) o.particles = *p.particles;
    if (!cmd.count("--seed") && p.seed) o.seed = *p.seed;
    model_c = p.c;
  }
  if (!a.c.empty()) {
    o.c_values = cli::parse_double_list(a.c, "--c");
  } else if (model_c) {
    o.c_values = {*model_c};
  }
  require(!o.c_values.empty(), "--c (or c in the model file) is required");
  require(o.model.sites >= 2, "--sites must be >= 2");
  require(o.particles >= 1 && o.particles <= o.model.sites, "--particles must lie in [1, sites]");
  require(o.model.t > 0.0, "--t must be positive");
  require(a.trials >= 2, "--trials must be >= 2");
  require(a.samples_per_trial >= 1, "--samples-per-trial must be >= 1");
  require(a.acf_length >= 10, "--acf-length must be >= 10");
  o.trials = a.trials;
  o.samples_per_trial = a.samples_per_trial;
  o.burn_in = a.burn_in;
  o.markov_thin = a.thin;
  o.acf_length = a.acf_length;
  o.algorithms = parse_algorithms(a.algorithms);

  const auto points = run_double_well(o);
  ordered_json report;
  report["command"] = "double-well";
  report["seed"] = o.seed;
  report["nTrials"] = o.trials;
  report["samplesPerTrial"] = o.samples_per_trial;
  report["model"] = {{"L", o.model.sites}, {"a", o.model.a}, {"b", o.model.b},
                     {"t", o.model.t},     {"N", o.particles}};
  report["points"] = ordered_json::array();
  bool failed = false;
  for (const auto& p : points) {
    ordered_json j;
    j["c"] = p.c;
    j["observable"] = "left_well_count";
    j["reference"] = p.exact_left_count;
    j["exactImbalance"] = p.exact_imbalance;
    j["bernoulliP"] = p.bernoulli_p;
    j["bernoulliError"] = p.bernoulli_error;
    j["eta"] = optional_json(p.eta);
    j["algorithms"] = ordered_json::array();
    for (const auto& s : p.algorithms) {
      j["algorithms"].push_back({{"algorithm", to_string(s.algorithm)},
                                 {"meanImbalance", s.mean_imbalance},
                                 {"imbalanceStderr", s.imbalance_stderr},
                                 {"rmsError", s.rms_error},
                                 {"tau_sum", optional_json(s.tau_sum)},
                                 {"tau_logfit", optional_json(s.tau_logfit)},
                                 {"ledger", ledger_json(s.ledger)}});
    }
    if (p.failure) {
      j["failure"] = *p.failure;
      failed = true;
    }
    report["points"].push_back(std::move(j));
  }
  cli::write_output(a.common.out, pretty(report));
  return failed ? kExitNumerical : kExitOk;
}

// --- anderson -------------------------------------------------------------------

struct AndersonArgs {
  Common common;
  std::string model;
  std::string w;
  std::string v = "0";
  std::size_t lx = 4;
  std::size_t ly = 4;
  double t = 1.0;
  std::size_t n_up = 4;
  std::size_t n_dn = 4;
  std::size_t realizations = 10;
  std::size_t trials = 1000;
  std::size_t samples_per_trial = 100;
  std::size_t burn_in = 2000;
  std::size_t thin = 1;
  std::size_t reference_samples = 100000;
  std::size_t acf_length = 10000;
  std::size_t site = 1;
};

int run_anderson_cmd(const AndersonArgs& a, const CLI::App& cmd) {
  AndersonOptions o;
  o.lx = a.lx;
  o.ly = a.ly;
  o.t = a.t;
  o.n_up = a.n_up;
  o.n_dn = a.n_dn;
  o.seed = a.common.seed;
  std::optional<double> model_w;
  std::optional<double> model_v;
  if (!a.model.empty()) {
    const ModelParams p = load_model_params(a.model);
    const AndersonParams m = to_anderson(p);
    if (!cmd.count("--lx")) o.lx = m.lx;
    if (!cmd.count("--ly")) o.ly = m.ly;
    if (!cmd.count("--t")) o.t = m.t;
    if (p.particles && !p.n_up && !p.n_dn) {
      require(*p.particles % 2 == 0, "N must be even when Nup/Ndn are not given");
      if (!cmd.count("--n-up")) o.n_up = *p.particles / 2;
      if (!cmd.count("--n-dn")) o.n_dn = *p.particles / 2;
    }
    if (p.n_up && !cmd.count("--n-up")) o.n_up = *p.n_up;
    if (p.n_dn && !cmd.count("--n-dn")) o.n_dn = *p.n_dn;
    if (p.seed && !cmd.count("--seed")) o.seed = *p.seed;
    model_w = p.w;
    model_v = p.v;
  }
  if (!a.w.empty()) {
    o.w_values = cli::parse_double_list(a.w, "--w");
  } else if (model_w) {
    o.w_values = {*model_w};
  }
  o.v_values = (model_v && !cmd.count("--v")) ? std::vector<double>{*model_v}
                                              : cli::parse_double_list(a.v, "--v");
  require(!o.w_values.empty(), "--w (or W in the model file) is required");
  for (double w : o.w_values) require(w >= 0.0, "--w values must be >= 0");
  require(o.lx >= 2 && o.ly >= 2, "--lx and --ly must be >= 2");
  require(o.t > 0.0, "--t must be positive");
  const std::size_t sites = o.lx * o.ly;
  require(o.n_up >= 1 && o.n_up <= sites && o.n_dn >= 1 && o.n_dn <= sites,
          "--n-up and --n-dn must lie in [1, Lx*Ly]");
  require(a.site >= 1 && a.site <= sites, "--site must lie in [1, Lx*Ly]");
  require(a.realizations >= 1, "--realizations must be >= 1");
  require(a.trials >= 2, "--trials must be >= 2");
  require(a.samples_per_trial >= 1, "--samples-per-trial must be >= 1");
  require(a.reference_samples >= 1, "--reference-samples must be >= 1");
  require(a.acf_length >= 10, "--acf-length must be >= 10");
  o.site = a.site - 1;
  o.realizations = a.realizations;
  o.trials = a.trials;
  o.samples_per_trial = a.samples_per_trial;
  o.burn_in = a.burn_in;
  o.markov_thin = a.thin;
  o.reference_samples = a.reference_samples;
  o.acf_length = a.acf_length;

  const auto points = run_anderson(o);
  ordered_json report;
  report["command"] = "anderson";
  report["seed"] = o.seed;
  report["nTrials"] = o.trials;
  report["samplesPerTrial"] = o.samples_per_trial;
  report["referenceSamples"] = o.reference_samples;
  report["model"] = {{"Lx", o.lx}, {"Ly", o.ly}, {"t", o.t}, {"Nup", o.n_up}, {"Ndn", o.n_dn}};
  report["points"] = ordered_json::array();
  bool failed = false;
  for (const auto& p : points) {
    ordered_json j;
    j["W"] = p.w;
    j["V"] = p.v;
    j["realization"] = p.realization + 1;
    j["observable"] = "n_site";
    j["site"] = a.site;
    j["reference"] = p.reference;
    j["ffs"] = {{"mean", p.ffs_mean}, {"rmsError", p.ffs_error}, {"ledger", ledger_json(p.ffs_ledger)}};
    j["markov"] = {{"mean", p.markov_mean},
                   {"rmsError", p.markov_error},
                   {"ledger", ledger_json(p.markov_ledger)}};
    j["tau_sum"] = optional_json(p.tau_sum);
    j["tau_logfit"] = optional_json(p.tau_logfit);
    j["eta"] = optional_json(p.eta);
    if (p.failure) {
      j["failure"] = *p.failure;
      failed = true;
    }
    report["points"].push_back(std::move(j));
  }
  cli::write_output(a.common.out, pretty(report));
  return failed ? kExitNumerical : kExitOk;
}

// --- dpp ------------------------------------------------------------------------

struct DppArgs {
  Common common;
  std::string kernel;
  SyntheticSpec synthetic;
  std::size_t samples = 400;
  bool mbr = false;
};

int run_dpp(const DppArgs& a) {
  std::vector<FeatureVector> items;
  std::optional<Kernel> kernel;
  if (!a.kernel.empty()) {
    kernel.emplace(load_matrix_csv(a.kernel));
    if (a.mbr) items = vectors_from_kernel(*kernel);
  } else {
    RngStream gen = RngStream(a.common.seed).derive(0);
    items = synthetic_vectors(a.synthetic, gen);
    kernel.emplace(kernel_from_vectors(items));
  }
  const DppSampler sampler(*kernel);

  const RngStream root(a.common.seed);
  RngStream rng = root.derive(1);
  FlopLedger ledger;
  std::vector<std::vector<std::size_t>> subsets;
  subsets.reserve(a.samples);
  for (std::size_t i = 0; i < a.samples; ++i) subsets.push_back(sampler.sample(rng, ledger));

  ordered_json report;
  report["command"] = "dpp";
  report["seed"] = a.common.seed;
  report["items"] = kernel->size();
  report["expectedSize"] = sampler.expected_size();
  report["subsets"] = ordered_json::array();
  for (const auto& s : subsets) report["subsets"].push_back(one_based(s));
  report["ledger"] = ledger_json(ledger);
  if (a.mbr) {
    std::vector<FeatureVector> reps;
    std::vector<std::size_t> owner;
    for (std::size_t i = 0; i < subsets.size(); ++i) {
      auto r = subset_representative(items, subsets[i]);
      if (!r.empty()) {
        reps.push_back(std::move(r));
        owner.push_back(i);
      }
    }
    if (reps.empty()) {
      report["mbrIndex"] = nullptr;
    } else {
      const std::size_t win = owner[mbr_select(reps)];
      report["mbrIndex"] = win + 1;
      report["mbrSubset"] = one_based(subsets[win]);
    }
  }
  cli::write_output(a.common.out, pretty(report));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"detsamp: determinantal samplers and experiment drivers", "detsamp"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_help_all_flag("--help-all");

  SampleArgs sample;
  auto* c_sample = app.add_subcommand("sample", "Draw configurations from an orbital matrix CSV");
  add_common(c_sample, sample.common);
  c_sample->add_option("--orbitals", sample.orbitals, "Orbital matrix CSV (L x N)")->required();
  c_sample->add_option("--algorithm", sample.algorithm, "ffs | hkpv | markov")->capture_default_str();
  c_sample->add_option("--samples", sample.samples, "Number of samples")->capture_default_str();
  c_sample->add_option("--burn-in", sample.burn_in, "Markov burn-in steps")->capture_default_str();
  c_sample->add_option("--thin", sample.thin, "Markov steps between samples")->capture_default_str();

  OrbitalArgs orbitals;
  auto* c_orb = app.add_subcommand("orbitals", "Write an orbital matrix CSV");
  add_common(c_orb, orbitals.common);
  c_orb->add_option("--sites", orbitals.sites, "L for a random orthonormal matrix")->capture_default_str();
  c_orb->add_option("--particles", orbitals.particles, "N for a random orthonormal matrix")
      ->capture_default_str();
  c_orb->add_option("--model", orbitals.model, "Model JSON; writes its ground-state orbitals");

  BenchArgs bench;
  auto* c_bench = app.add_subcommand("bench-flops", "Ledger operation counts per (N, algorithm)");
  add_common(c_bench, bench.common);
  c_bench->add_option("--sites", bench.sites, "L")->capture_default_str();
  c_bench->add_option("--particles", bench.particles, "Comma-separated N list")->capture_default_str();
  c_bench->add_option("--algorithms", bench.algorithms, "Comma-separated algorithms")->capture_default_str();

  DoubleWellArgs dw;
  auto* c_dw = app.add_subcommand("double-well", "Double-well imbalance sweep over c");
  add_common(c_dw, dw.common);
  c_dw->add_option("--model", dw.model, "Model JSON (double_well)");
  c_dw->add_option("--c", dw.c, "Comma-separated skewness values");
  c_dw->add_option("--sites", dw.sites, "L")->capture_default_str();
  c_dw->add_option("--a", dw.a)->capture_default_str();
  c_dw->add_option("--b", dw.b)->capture_default_str();
  c_dw->add_option("--t", dw.t, "Hopping")->capture_default_str();
  c_dw->add_option("--particles", dw.particles, "N")->capture_default_str();
  c_dw->add_option("--trials", dw.trials)->capture_default_str();
  c_dw->add_option("--samples-per-trial", dw.samples_per_trial)->capture_default_str();
  c_dw->add_option("--burn-in", dw.burn_in, "Markov burn-in steps")->capture_default_str();
  c_dw->add_option("--thin", dw.thin, "Markov steps per sample; 0 = one sweep")->capture_default_str();
  c_dw->add_option("--acf-length", dw.acf_length)->capture_default_str();
  c_dw->add_option("--algorithms", dw.algorithms)->capture_default_str();

  AndersonArgs an;
  auto* c_an = app.add_subcommand("anderson", "Anderson(-Hubbard) first-site occupation grid");
  add_common(c_an, an.common);
  c_an->add_option("--model", an.model, "Model JSON (anderson)");
  c_an->add_option("--w", an.w, "Comma-separated disorder strengths");
  c_an->add_option("--v", an.v, "Comma-separated Gutzwiller strengths")->capture_default_str();
  c_an->add_option("--lx", an.lx)->capture_default_str();
  c_an->add_option("--ly", an.ly)->capture_default_str();
  c_an->add_option("--t", an.t)->capture_default_str();
  c_an->add_option("--n-up", an.n_up)->capture_default_str();
  c_an->add_option("--n-dn", an.n_dn)->capture_default_str();
  c_an->add_option("--realizations", an.realizations)->capture_default_str();
  c_an->add_option("--trials", an.trials)->capture_default_str();
  c_an->add_option("--samples-per-trial", an.samples_per_trial)->capture_default_str();
  c_an->add_option("--burn-in", an.burn_in)->capture_default_str();
  c_an->add_option("--thin", an.thin, "Markov steps per sample; 0 = one sweep")->capture_default_str();
  c_an->add_option("--reference-samples", an.reference_samples)->capture_default_str();
  c_an->add_option("--acf-length", an.acf_length)->capture_default_str();
  c_an->add_option("--site", an.site, "Measured site, 1-based")->capture_default_str();

  DppArgs dpp;
  auto* c_dpp = app.add_subcommand("dpp", "L-ensemble DPP subsets with optional MBR selection");
  add_common(c_dpp, dpp.common);
  c_dpp->add_option("--kernel", dpp.kernel, "Kernel CSV; synthetic vectors when omitted");
  c_dpp->add_option("--items", dpp.synthetic.items)->capture_default_str();
  c_dpp->add_option("--dimension", dpp.synthetic.dimension)->capture_default_str();
  c_dpp->add_option("--clusters", dpp.synthetic.clusters)->capture_default_str();
  c_dpp->add_option("--similarity", dpp.synthetic.similarity)->capture_default_str();
  c_dpp->add_option("--spread", dpp.synthetic.magnitude_spread)->capture_default_str();
  c_dpp->add_option("--samples", dpp.samples)->capture_default_str();
  c_dpp->add_flag("--mbr", dpp.mbr, "Select the MBR summary");

  try {
    std::vector<std::string> args(argv, argv + argc);
    args = detsamp::cli::expand_config(args);
    // CLI11 takes the arguments reversed, without the program name.
    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  } catch (const detsamp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    if (*c_sample) return run_sample(sample);
    if (*c_orb) return run_orbitals(orbitals);
    if (*c_bench) return run_bench(bench);
    if (*c_dw) return run_double_well_cmd(dw, *c_dw);
    if (*c_an) return run_anderson_cmd(an, *c_an);
    if (*c_dpp) return run_dpp(dpp);
  } catch (const detsamp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return detsamp::is_input_error(e.code()) ? kExitInput : kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitInput;
}
