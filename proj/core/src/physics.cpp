// Copyright 2026 The detsamp Authors
// SPDX-License-Identifier: Apache-2.0

#include "detsamp/physics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <json.hpp>

#include "detsamp/error.hpp"
#include "detsamp/linalg.hpp"

namespace detsamp {

namespace {

void validate(const LatticeSpec& spec) {
  if (!(spec.t > 0.0) || !std::isfinite(spec.t)) {
    throw Error(ErrorCode::InvalidInput, "hopping t must be positive and finite");
  }
  if (spec.kind == LatticeKind::Chain && spec.ly != 1) {
    throw Error(ErrorCode::InvalidInput, "chain lattice requires ly = 1");
  }
  if (spec.sites() < 2) throw Error(ErrorCode::InvalidInput, "lattice needs at least 2 sites");
  if (spec.potential.size() != spec.sites()) {
    throw Error(ErrorCode::InvalidInput, "potential length must equal the site count");
  }
  for (double v : spec.potential)
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidInput, "potential must be finite");
  if (!spec.coordinates.empty() && spec.coordinates.size() != spec.sites()) {
    throw Error(ErrorCode::InvalidInput, "coordinates length must equal the site count");
  }
}

}  // namespace

Matrix hamiltonian(const LatticeSpec& spec) {
  validate(spec);
  const std::size_t n = spec.sites();
  Matrix h(n, n);
  for (std::size_t i = 0; i < n; ++i) h(i, i) = spec.potential[i];
  auto bond = [&](std::size_t i, std::size_t j) {
    h(i, j) = -spec.t;
    h(j, i) = -spec.t;
  };
  for (std::size_t ix = 0; ix < spec.lx; ++ix) {
    for (std::size_t iy = 0; iy < spec.ly; ++iy) {
      const std::size_t s = ix * spec.ly + iy;
      if (ix + 1 < spec.lx) bond(s, s + spec.ly);
      if (iy + 1 < spec.ly) bond(s, s + 1);
    }
  }
  return h;
}

LatticeSpec build_double_well(const DoubleWellParams& p) {
  if (p.sites < 2) throw Error(ErrorCode::InvalidInput, "double well needs L >= 2");
  LatticeSpec spec;
  spec.kind = LatticeKind::Chain;
  spec.lx = p.sites;
  spec.ly = 1;
  spec.t = p.t;
  spec.coordinates.resize(p.sites);
  spec.potential.resize(p.sites);
  const double step = 4.0 / static_cast<double>(p.sites - 1);
  for (std::size_t i = 0; i < p.sites; ++i) {
    // Mirror-exact grid: x_i = -x_{L-1-i}.
    const double x = (static_cast<double>(2 * i) - static_cast<double>(p.sites - 1)) * 0.5 * step;
    const double w = x * x - p.b;
    spec.coordinates[i] = x;
    spec.potential[i] = p.a * w * w - p.c * x;
  }
  validate(spec);
  return spec;
}

LatticeSpec build_anderson(const AndersonParams& p, RngStream& rng) {
  if (p.lx < 2 || p.ly < 2) throw Error(ErrorCode::InvalidInput, "Anderson lattice needs Lx, Ly >= 2");
  if (!(p.w >= 0.0) || !std::isfinite(p.w)) {
    throw Error(ErrorCode::InvalidInput, "disorder W must be finite and non-negative");
  }
  LatticeSpec spec;
  spec.kind = LatticeKind::Square;
  spec.lx = p.lx;
  spec.ly = p.ly;
  spec.t = p.t;
  spec.potential.resize(p.lx * p.ly);
  for (double& v : spec.potential) v = p.w * (2.0 * rng.uniform() - 1.0);
  validate(spec);
  return spec;
}

GroundState ground_state(const LatticeSpec& spec, std::size_t particles, double gap_tolerance) {
  const Matrix h = hamiltonian(spec);
  const std::size_t n = h.rows();
  if (particles == 0 || particles > n) {
    throw Error(ErrorCode::InvalidInput, "particle count must be in [1, L]");
  }
  EigenDecomposition eig = symmetric_eig(h);
  if (particles < n && !(eig.values[particles] - eig.values[particles - 1] > gap_tolerance)) {
    throw Error(ErrorCode::DegenerateFilling,
                "gap above the Fermi level is " +
                    std::to_string(eig.values[particles] - eig.values[particles - 1]));
  }
  Matrix u(n, particles);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < particles; ++k) u(i, k) = eig.vectors(i, k);
  return GroundState{OrbitalMatrix(std::move(u)), std::move(eig.values)};
}

OrbitalMatrix ground_state_orbitals(const LatticeSpec& spec, std::size_t particles,
                                    double gap_tolerance) {
  return ground_state(spec, particles, gap_tolerance).orbitals;
}

int well_imbalance(const SampleConfig& config, std::span<const double> coordinates) {
  int d = 0;
  for (auto x : config) {
    if (coordinates[x] > 0.0) ++d;
    else if (coordinates[x] < 0.0) --d;
  }
  return d;
}

std::size_t left_well_count(const SampleConfig& config, std::span<const double> coordinates) {
  return static_cast<std::size_t>(
      std::count_if(config.begin(), config.end(), [&](std::size_t x) { return coordinates[x] < 0.0; }));
}

double left_well_weight(const OrbitalMatrix& u, std::size_t column, std::span<const double> coordinates) {
  double p = 0.0;
  for (std::size_t x = 0; x < u.sites(); ++x)
    if (coordinates[x] < 0.0) p += u(x, column) * u(x, column);
  return p;
}

std::size_t double_occupancy(const SpinfulConfig& config) {
  std::size_t d = 0;
  for (auto x : config.up)
    if (std::find(config.dn.begin(), config.dn.end(), x) != config.dn.end()) ++d;
  return d;
}

double gutzwiller_log_weight(const SpinfulConfig& config, double v) {
  return -0.5 * v * static_cast<double>(double_occupancy(config));
}

double reweighted_expectation(std::span<const SpinfulConfig> samples, double v,
                              const SpinfulObservable& observable) {
  if (samples.empty()) throw Error(ErrorCode::InvalidInput, "no samples to reweight");
  if (!std::isfinite(v)) throw Error(ErrorCode::InvalidInput, "V must be finite");
  std::vector<double> log_w(samples.size());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    log_w[i] = 2.0 * gutzwiller_log_weight(samples[i], v);
    top = std::max(top, log_w[i]);
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double w = std::exp(log_w[i] - top);
    num += w * observable(samples[i]);
    den += w;
  }
  if (!(den > 0.0) || !std::isfinite(den)) {
    throw Error(ErrorCode::AllZeroWeights, "all reweighting factors vanished");
  }
  return num / den;
}

double bernoulli_error(double p, double samples) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidInput, "p must lie in [0, 1]");
  if (!(samples >= 1.0)) throw Error(ErrorCode::InvalidInput, "sample count must be >= 1");
  return std::sqrt(p * (1.0 - p) / samples);
}

// --- Parameter files --------------------------------------------------------------

namespace {

using nlohmann::json;

double finite_number(const json& j, const char* key) {
  if (!j.is_number()) throw Error(ErrorCode::InvalidInput, std::string(key) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw Error(ErrorCode::InvalidInput, std::string(key) + " must be finite");
  return v;
}

std::uint64_t count(const json& j, const char* key) {
  if (!j.is_number_integer() || (!j.is_number_unsigned() && j.get<std::int64_t>() < 0)) {
    throw Error(ErrorCode::InvalidInput, std::string(key) + " must be a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

}  // namespace

ModelParams parse_model_params(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput, std::string("model file: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::InvalidInput, "model file must hold a JSON object");

  ModelParams p;
  for (const auto& [key, value] : doc.items()) {
    if (key == "model") {
      if (!value.is_string()) throw Error(ErrorCode::InvalidInput, "model must be a string");
      p.model = value.get<std::string>();
    } else if (key == "L") {
      p.sites = count(value, "L");
    } else if (key == "Lx") {
      p.lx = count(value, "Lx");
    } else if (key == "Ly") {
      p.ly = count(value, "Ly");
    } else if (key == "a") {
      p.a = finite_number(value, "a");
    } else if (key == "b") {
      p.b = finite_number(value, "b");
    } else if (key == "c") {
      p.c = finite_number(value, "c");
    } else if (key == "t") {
      p.t = finite_number(value, "t");
    } else if (key == "W") {
      p.w = finite_number(value, "W");
    } else if (key == "V") {
      p.v = finite_number(value, "V");
    } else if (key == "N") {
      p.particles = count(value, "N");
    } else if (key == "Nup") {
      p.n_up = count(value, "Nup");
    } else if (key == "Ndn") {
      p.n_dn = count(value, "Ndn");
    } else if (key == "seed") {
      p.seed = count(value, "seed");
    } else {
      throw Error(ErrorCode::InvalidInput, "unknown model key: " + key);
    }
  }

  if (p.model != "double_well" && p.model != "anderson") {
    throw Error(ErrorCode::InvalidInput, "model must be \"double_well\" or \"anderson\"");
  }
  if (p.t && !(*p.t > 0.0)) throw Error(ErrorCode::InvalidInput, "t must be positive");
  if (p.w && !(*p.w >= 0.0)) throw Error(ErrorCode::InvalidInput, "W must be non-negative");
  if (p.sites && *p.sites < 2) throw Error(ErrorCode::InvalidInput, "L must be >= 2");
  if ((p.lx && *p.lx < 2) || (p.ly && *p.ly < 2)) {
    throw Error(ErrorCode::InvalidInput, "Lx and Ly must be >= 2");
  }
  if (p.model == "double_well") {
    if (p.lx || p.ly || p.w || p.n_up || p.n_dn) {
      throw Error(ErrorCode::InvalidInput, "Lx, Ly, W, Nup, Ndn do not apply to double_well");
    }
    const std::size_t sites = p.sites.value_or(DoubleWellParams{}.sites);
    if (p.particles && (*p.particles == 0 || *p.particles > sites)) {
      throw Error(ErrorCode::InvalidInput, "N must be in [1, L]");
    }
  } else {
    if (p.sites || p.a || p.b || p.c) {
      throw Error(ErrorCode::InvalidInput, "L, a, b, c do not apply to anderson");
    }
    const std::size_t sites = p.lx.value_or(4) * p.ly.value_or(4);
    for (const auto& n : {p.particles, p.n_up, p.n_dn}) {
      if (n && (*n == 0 || *n > sites)) throw Error(ErrorCode::InvalidInput, "particle counts must be in [1, Lx*Ly]");
    }
  }
  return p;
}

ModelParams load_model_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model_params(ss.str());
}

DoubleWellParams to_double_well(const ModelParams& p) {
  if (p.model != "double_well") throw Error(ErrorCode::InvalidInput, "not a double_well model");
  DoubleWellParams d;
  if (p.sites) d.sites = *p.sites;
  if (p.a) d.a = *p.a;
  if (p.b) d.b = *p.b;
  if (p.c) d.c = *p.c;
  if (p.t) d.t = *p.t;
  return d;
}

AndersonParams to_anderson(const ModelParams& p) {
  if (p.model != "anderson") throw Error(ErrorCode::InvalidInput, "not an anderson model");
  AndersonParams a;
  if (p.lx) a.lx = *p.lx;
  if (p.ly) a.ly = *p.ly;
  if (p.w) a.w = *p.w;
  if (p.t) a.t = *p.t;
  return a;
}

}  // namespace detsamp
