// Copyright 2026 The detsamp Authors
// SPDX-License-Identifier: Apache-2.0

#include "detsamp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <sstream>
#include <string>
#include <thread>

#include "detsamp/error.hpp"
#include "detsamp/ffs.hpp"
#include "detsamp/linalg.hpp"
#include "detsamp/reference.hpp"
#include "detsamp/stats.hpp"

namespace detsamp {

std::string_view to_string(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::Ffs: return "ffs";
    case Algorithm::Hkpv: return "hkpv";
    case Algorithm::Markov: return "markov";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "ffs") return Algorithm::Ffs;
  if (name == "hkpv") return Algorithm::Hkpv;
  if (name == "markov") return Algorithm::Markov;
  throw Error(ErrorCode::InvalidInput, "unknown algorithm: " + std::string(name));
}

std::size_t worker_count() {
  if (const char* env = std::getenv("DETSAMP_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min(worker_count(), count);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// --- FLOP benchmark --------------------------------------------------------

std::vector<BenchRow> bench_flops(std::size_t sites, const std::vector<std::size_t>& particles,
                                  const std::vector<Algorithm>& algorithms, std::uint64_t seed) {
  for (auto n : particles) {
    if (n == 0 || n > sites) throw Error(ErrorCode::InvalidInput, "every N must lie in [1, L]");
  }
  const RngStream root(seed);
  std::vector<BenchRow> rows;
  for (auto n : particles) {
    RngStream setup = root.derive(n);
    const OrbitalMatrix u = random_orthonormal(sites, n, setup);
    for (auto alg : algorithms) {
      RngStream rng = root.derive(n).derive(static_cast<std::uint64_t>(alg) + 1);
      FlopLedger ledger;
      switch (alg) {
        case Algorithm::Ffs: (void)ffs_sample(u, rng, ledger); break;
        case Algorithm::Hkpv: (void)hkpv_sample(u, rng, ledger); break;
        case Algorithm::Markov: {
          MarkovOptions opts;
          opts.keep = n;
          (void)markov_sample_stream(u, {}, opts, rng, ledger);
          break;
        }
      }
      rows.push_back({n, alg, ledger});
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
    if (a.algorithm != b.algorithm) return to_string(a.algorithm) < to_string(b.algorithm);
    return a.particles < b.particles;
  });
  return rows;
}

std::string bench_rows_to_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << "N,algorithm,multiplies,additions,total\n";
  for (const auto& r : rows) {
    os << r.particles << ',' << to_string(r.algorithm) << ',' << r.ledger.multiplies() << ','
       << r.ledger.additions() << ',' << r.ledger.total() << '\n';
  }
  return os.str();
}

// --- Shared trial helpers ------------------------------------------------------

namespace {

std::optional<double> safe_tau(const std::vector<double>& series, bool logfit) {
  try {
    const AcfCurve curve = acf(series, default_acf_cutoff(series.size()));
    return logfit ? acl_logfit(curve) : acl_sum(curve);
  } catch (const Error&) {
    return std::nullopt;
  }
}

FlopLedger sum_ledgers(const std::vector<FlopLedger>& ledgers) {
  FlopLedger total;
  for (const auto& l : ledgers) total += l;
  return total;
}

/// `count` independent exact draws or one correlated Markov stream.
std::vector<SampleConfig> draw_configs(Algorithm alg, const OrbitalMatrix& u, std::size_t count,
                                       std::size_t burn_in, std::size_t thin, RngStream& rng,
                                       FlopLedger& ledger) {
  if (alg == Algorithm::Markov) {
    MarkovOptions opts;
    opts.burn_in = burn_in;
    opts.keep = count;
    opts.thin = thin;
    return markov_sample_stream(u, {}, opts, rng, ledger);
  }
  std::vector<SampleConfig> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(alg == Algorithm::Ffs ? ffs_sample(u, rng, ledger) : hkpv_sample(u, rng, ledger));
  }
  return out;
}

// Errors at roundoff level carry no information; no ratio is formed from them.
constexpr double kNegligibleError = 1e-12;

std::string failure_text(Algorithm alg, const Error& e) {
  return std::string(to_string(alg)) + ": " + e.what();
}

}  // namespace

// --- Double well -------------------------------------------------------------

std::vector<DoubleWellPoint> run_double_well(const DoubleWellOptions& opts) {
  if (opts.trials < 2) throw Error(ErrorCode::TooFewTrials, "need at least 2 trials");
  if (opts.samples_per_trial == 0) throw Error(ErrorCode::InvalidInput, "samples per trial must be positive");
  const std::size_t thin = opts.markov_thin == 0 ? opts.particles : opts.markov_thin;
  const RngStream root(opts.seed);

  std::vector<DoubleWellPoint> points;
  for (std::size_t ci = 0; ci < opts.c_values.size(); ++ci) {
    DoubleWellParams params = opts.model;
    params.c = opts.c_values[ci];
    const LatticeSpec spec = build_double_well(params);
    const GroundState gs = ground_state(spec, opts.particles);
    const OrbitalMatrix& u = gs.orbitals;
    const std::vector<double>& coords = spec.coordinates;

    DoubleWellPoint point;
    point.c = params.c;
    const auto density = u.kernel_diagonal();
    for (std::size_t x = 0; x < density.size(); ++x) {
      if (coords[x] > 0.0) point.exact_imbalance += density[x];
      if (coords[x] < 0.0) {
        point.exact_imbalance -= density[x];
        point.exact_left_count += density[x];
      }
    }
    point.bernoulli_p = std::clamp(left_well_weight(u, opts.particles - 1, coords), 0.0, 1.0);
    point.bernoulli_error = bernoulli_error(point.bernoulli_p, static_cast<double>(opts.samples_per_trial));

    std::optional<double> ffs_rms;
    std::optional<double> markov_rms;
    for (auto alg : opts.algorithms) {
      const RngStream alg_root = root.derive(ci).derive(static_cast<std::uint64_t>(alg) + 1);
      std::vector<double> left_means(opts.trials);
      std::vector<double> imbalance_means(opts.trials);
      std::vector<FlopLedger> ledgers(opts.trials);
      try {
        parallel_for(opts.trials, [&](std::size_t t) {
          RngStream rng = alg_root.derive(t);
          const auto configs =
              draw_configs(alg, u, opts.samples_per_trial, opts.burn_in, thin, rng, ledgers[t]);
          double left = 0.0, imb = 0.0;
          for (const auto& c : configs) {
            left += static_cast<double>(left_well_count(c, coords));
            imb += well_imbalance(c, coords);
          }
          left_means[t] = left / static_cast<double>(configs.size());
          imbalance_means[t] = imb / static_cast<double>(configs.size());
        });

        AlgorithmSummary s;
        s.algorithm = alg;
        s.mean_imbalance = mean(imbalance_means);
        s.imbalance_stderr = standard_error(imbalance_means);
        s.rms_error = trial_rms_error(left_means, point.exact_left_count);
        s.ledger = sum_ledgers(ledgers);

        RngStream acf_rng = alg_root.derive(opts.trials);
        FlopLedger acf_ledger;
        const auto stream = draw_configs(alg, u, opts.acf_length, opts.burn_in, thin, acf_rng, acf_ledger);
        std::vector<double> series;
        series.reserve(stream.size());
        for (const auto& c : stream) series.push_back(well_imbalance(c, coords));
        s.tau_sum = safe_tau(series, false);
        s.tau_logfit = safe_tau(series, true);

        if (alg == Algorithm::Ffs) ffs_rms = s.rms_error;
        if (alg == Algorithm::Markov) markov_rms = s.rms_error;
        point.algorithms.push_back(std::move(s));
      } catch (const Error& e) {
        if (is_input_error(e.code())) throw;
        point.failure = failure_text(alg, e);
      }
    }
    if (ffs_rms && markov_rms && *ffs_rms > kNegligibleError) point.eta = error_ratio(*markov_rms, *ffs_rms);
    points.push_back(std::move(point));
  }
  return points;
}

// --- Anderson(-Hubbard) -------------------------------------------------------

namespace {

SpinfulConfig ffs_spinful(const OrbitalMatrix& up, const OrbitalMatrix& dn, RngStream& rng,
                          FlopLedger& ledger) {
  SpinfulConfig c;
  c.up = sorted_config(ffs_sample(up, rng, ledger));
  c.dn = sorted_config(ffs_sample(dn, rng, ledger));
  return c;
}

double site_occupation(const SpinfulConfig& c, std::size_t site) {
  const auto in = [site](const SampleConfig& s) {
    return std::find(s.begin(), s.end(), site) != s.end() ? 1.0 : 0.0;
  };
  return in(c.up) + in(c.dn);
}

}  // namespace

std::vector<AndersonPoint> run_anderson(const AndersonOptions& opts) {
  if (opts.trials < 2) throw Error(ErrorCode::TooFewTrials, "need at least 2 trials");
  if (opts.samples_per_trial == 0 || opts.reference_samples == 0) {
    throw Error(ErrorCode::InvalidInput, "sample counts must be positive");
  }
  if (opts.site >= opts.lx * opts.ly) throw Error(ErrorCode::InvalidInput, "measured site out of range");
  for (double v : opts.v_values)
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidInput, "V must be finite");
  const std::size_t thin = opts.markov_thin == 0 ? opts.n_up + opts.n_dn : opts.markov_thin;
  const RngStream root(opts.seed);
  const SpinfulObservable observable = [site = opts.site](const SpinfulConfig& c) {
    return site_occupation(c, site);
  };

  std::vector<AndersonPoint> points;
  for (std::size_t r = 0; r < opts.realizations; ++r) {
    RngStream disorder_rng = root.derive(0).derive(r);
    AndersonParams unit{opts.lx, opts.ly, 1.0, opts.t};
    const LatticeSpec pattern = build_anderson(unit, disorder_rng);

    for (std::size_t wi = 0; wi < opts.w_values.size(); ++wi) {
      const double w = opts.w_values[wi];
      if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorCode::InvalidInput, "W must be finite and >= 0");
      LatticeSpec spec = pattern;
      for (double& e : spec.potential) e *= w;
      const OrbitalMatrix u_up = ground_state_orbitals(spec, opts.n_up);
      const OrbitalMatrix u_dn = ground_state_orbitals(spec, opts.n_dn);

      for (std::size_t vi = 0; vi < opts.v_values.size(); ++vi) {
        const double v = opts.v_values[vi];
        AndersonPoint point;
        point.w = w;
        point.v = v;
        point.realization = r;
        const RngStream cell = root.derive(r + 1).derive(wi).derive(vi);
        try {
          RngStream ref_rng = cell.derive(0);
          FlopLedger ref_ledger;
          std::vector<SpinfulConfig> ref;
          ref.reserve(opts.reference_samples);
          for (std::size_t i = 0; i < opts.reference_samples; ++i) {
            ref.push_back(ffs_spinful(u_up, u_dn, ref_rng, ref_ledger));
          }
          point.reference = reweighted_expectation(ref, v, observable);
          ref.clear();
          ref.shrink_to_fit();

          std::vector<double> ffs_means(opts.trials);
          std::vector<FlopLedger> ffs_ledgers(opts.trials);
          const RngStream ffs_root = cell.derive(1);
          parallel_for(opts.trials, [&](std::size_t t) {
            RngStream rng = ffs_root.derive(t);
            std::vector<SpinfulConfig> samples;
            samples.reserve(opts.samples_per_trial);
            for (std::size_t i = 0; i < opts.samples_per_trial; ++i) {
              samples.push_back(ffs_spinful(u_up, u_dn, rng, ffs_ledgers[t]));
            }
            ffs_means[t] = reweighted_expectation(samples, v, observable);
          });
          point.ffs_mean = mean(ffs_means);
          point.ffs_error = trial_rms_error(ffs_means, point.reference);
          point.ffs_ledger = sum_ledgers(ffs_ledgers);

          const LogJastrowSpinful log_j = [v](const SpinfulConfig& c) { return gutzwiller_log_weight(c, v); };
          SpinfulMarkovOptions mopts;
          mopts.burn_in = opts.burn_in;
          mopts.keep = opts.samples_per_trial;
          mopts.thin = thin;
          std::vector<double> markov_means(opts.trials);
          std::vector<FlopLedger> markov_ledgers(opts.trials);
          const RngStream markov_root = cell.derive(2);
          parallel_for(opts.trials, [&](std::size_t t) {
            RngStream rng = markov_root.derive(t);
            const auto stream = markov_sample_spinful(u_up, u_dn, log_j, mopts, rng, markov_ledgers[t]);
            double s = 0.0;
            for (const auto& c : stream) s += observable(c);
            markov_means[t] = s / static_cast<double>(stream.size());
          });
          point.markov_mean = mean(markov_means);
          point.markov_error = trial_rms_error(markov_means, point.reference);
          point.markov_ledger = sum_ledgers(markov_ledgers);

          RngStream acf_rng = cell.derive(3);
          FlopLedger acf_ledger;
          SpinfulMarkovOptions aopts = mopts;
          aopts.keep = opts.acf_length;
          const auto stream = markov_sample_spinful(u_up, u_dn, log_j, aopts, acf_rng, acf_ledger);
          std::vector<double> series;
          series.reserve(stream.size());
          for (const auto& c : stream) series.push_back(observable(c));
          point.tau_sum = safe_tau(series, false);
          point.tau_logfit = safe_tau(series, true);

          if (point.ffs_error > kNegligibleError) point.eta = error_ratio(point.markov_error, point.ffs_error);
        } catch (const Error& e) {
          if (is_input_error(e.code())) throw;
          point.failure = e.what();
        }
        points.push_back(std::move(point));
      }
    }
  }
  return points;
}

}  // namespace detsamp
