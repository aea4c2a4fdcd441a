// skg: group secret-key generation over broadcast channels.
//
// Subcommands run protocol simulations, evaluate capacity formulas and
// bounds, execute the power-allocation optimizer, and emit CSV artifacts
// with JSON provenance sidecars. Exit codes: 0 success, 2 config error,
// 3 internal verification failure.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "skg/deterministic.hpp"
#include "skg/erasure.hpp"
#include "skg/gauss.hpp"
#include "skg/kkt.hpp"
#include "skg/sweeps.hpp"

using json = nlohmann::json;
using namespace skg;

namespace {

constexpr const char* kVersion = "0.1.0";

struct ConfigError : std::runtime_error {
  explicit ConfigError(std::vector<std::string> diags)
      : std::runtime_error("invalid configuration"), diagnostics(std::move(diags)) {}
  std::vector<std::string> diagnostics;
};

struct VerificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}
  void row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }
  void write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    auto put = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        out << cells[i];
      }
      out << '\n';
    };
    put(header_);
    for (const auto& r : rows_) put(r);
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// ---- config assembly --------------------------------------------------------

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read config file: " + path});
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError({std::string("config file is not valid JSON: ") + e.what()});
  }
  if (!j.is_object()) throw ConfigError({"config file must hold a JSON object"});
  return j;
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const std::exception&) {
    throw ConfigError({"field '" + key + "' has the wrong type"});
  }
}

std::vector<double> get_doubles(const json& j, const std::string& key) {
  try {
    return j.at(key).get<std::vector<double>>();
  } catch (const std::exception&) {
    throw ConfigError({"field '" + key + "' must be an array of numbers"});
  }
}

// ---- schema validation --------------------------------------------------------

void check_probability(const json& c, const std::string& key,
                       std::vector<std::string>& out) {
  if (!c.contains(key)) return;
  const double v = c.at(key).get<double>();
  if (v < 0.0 || v > 1.0) out.push_back(key + " must lie in [0, 1]");
}

bool is_prime_power(std::uint64_t q) {
  if (q < 2 || q > 65536) return false;
  std::uint64_t p = q;
  for (std::uint64_t d = 2; d * d <= q; ++d)
    if (q % d == 0) {
      p = d;
      break;
    }
  std::uint64_t m = 1;
  while (m < q) m *= p;
  return m == q;
}

std::vector<std::string> validate_config(const std::string& kind, const json& c) {
  std::vector<std::string> out;
  auto need = [&](std::initializer_list<const char*> keys) {
    for (const char* k : keys)
      if (!c.contains(k)) out.push_back(std::string("missing field '") + k + "'");
  };
  auto check_deltas = [&] {
    if (!c.contains("deltas")) return;
    auto d = get_doubles(c, "deltas");
    double sum = 0;
    for (double x : d) {
      if (x < 0) {
        out.push_back("deltas must be non-negative");
        break;
      }
    }
    for (double x : d) sum += x;
    if (std::abs(sum - 1.0) > 1e-12) out.push_back("deltas must sum to 1 within 1e-12");
  };
  auto check_gains = [&] {
    if (!c.contains("gains_db")) return;
    auto g = get_doubles(c, "gains_db");
    if (g.size() < 2) out.push_back("gains_db needs at least two entries");
    for (std::size_t i = 1; i < g.size(); ++i)
      if (!(g[i] > g[i - 1])) {
        out.push_back("gains must be strictly increasing");
        break;
      }
    if (c.contains("deltas") && get_doubles(c, "deltas").size() != g.size())
      out.push_back("deltas and gains_db must have equal length");
  };
  auto check_q = [&] {
    if (!c.contains("q")) return;
    const auto q = c.at("q").get<std::uint64_t>();
    if (!is_prime_power(q)) out.push_back("q must be a prime power in [2, 65536]");
  };
  auto check_positive = [&](const char* key) {
    if (c.contains(key) && !(c.at(key).get<double>() > 0))
      out.push_back(std::string(key) + " must be positive");
  };

  if (kind == "erasure-sim") {
    need({"delta", "delta_e"});
    check_probability(c, "delta", out);
    check_probability(c, "delta_e", out);
    check_q();
    if (get_or<std::uint64_t>(c, "m", 3) < 2) out.push_back("m must be at least 2");
    if (get_or<std::uint64_t>(c, "n", 1) < 1) out.push_back("n must be positive");
    if (get_or<std::uint64_t>(c, "L", 1) < 1) out.push_back("L must be positive");
  } else if (kind == "det-sim" || kind == "det-capacity") {
    need({"ranks", "deltas"});
    check_q();
    check_deltas();
    if (c.contains("ranks")) {
      auto r = c.at("ranks").get<std::vector<std::int64_t>>();
      if (r.empty() || r.front() != 0) out.push_back("ranks must start at 0");
      for (std::size_t i = 1; i < r.size(); ++i)
        if (r[i] < r[i - 1]) {
          out.push_back("ranks must be non-decreasing");
          break;
        }
      const auto L = get_or<std::int64_t>(c, "L", r.empty() ? 0 : r.back());
      if (!r.empty() && r.back() != L) out.push_back("ranks must end at L");
      if (c.contains("deltas") && get_doubles(c, "deltas").size() != r.size())
        out.push_back("deltas must have one entry per state (ranks length)");
    }
    if (kind == "det-sim" && get_or<std::uint64_t>(c, "m", 3) < 2)
      out.push_back("m must be at least 2");
  } else if (kind == "gauss-optimize" || kind == "gauss-bounds") {
    need({"gains_db", "deltas"});
    check_gains();
    check_deltas();
    if (kind == "gauss-optimize")
      check_positive("p_max");
    else if (c.contains("p_max") && c.at("p_max").get<double>() < 0)
      out.push_back("p_max must be non-negative");
  } else if (kind == "dof") {
    need({"gammas", "deltas"});
    check_deltas();
    if (c.contains("gammas")) {
      auto g = get_doubles(c, "gammas");
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (!(g[i] > 0)) {
          out.push_back("gammas must be positive");
          break;
        }
        if (i && !(g[i] > g[i - 1])) {
          out.push_back("gammas must be strictly increasing");
          break;
        }
      }
      if (c.contains("deltas") && get_doubles(c, "deltas").size() != g.size())
        out.push_back("deltas and gammas must have equal length");
    }
  } else if (kind == "example1" || kind == "example2" || kind == "example3") {
    check_positive("p_max");
  } else {
    out.push_back("unknown kind: " + kind);
  }
  return out;
}

// ---- executors ----------------------------------------------------------------

// Deterministic parallel map over trial indices.
template <typename Fn>
void parallel_trials(std::size_t trials, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), trials);
  std::vector<std::future<void>> futs;
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  for (std::size_t w = 0; w < workers; ++w)
    futs.push_back(std::async(std::launch::async, [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= trials) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mu);
          if (!err) err = std::current_exception();
        }
      }
    }));
  for (auto& f : futs) f.get();
  if (err) std::rethrow_exception(err);
}

CsvWriter run_erasure_sim(const json& c) {
  erasure::ErasureConfig cfg;
  cfg.m = get_or<std::uint64_t>(c, "m", 3);
  cfg.n = get_or<std::uint64_t>(c, "n", 1000);
  cfg.packet_len = get_or<std::uint64_t>(c, "L", 16);
  cfg.q = std::uint32_t(get_or<std::uint64_t>(c, "q", 65536));
  cfg.delta = c.at("delta").get<double>();
  cfg.delta_e = c.at("delta_e").get<double>();
  const std::uint64_t seed0 = get_or<std::uint64_t>(c, "seed", 0);
  const std::size_t trials = get_or<std::uint64_t>(c, "trials", 1);
  const bool leak = get_or<bool>(c, "leakage", true);

  CsvWriter csv({"trial", "seed", "n_star", "h", "l", "rate_bits_per_use",
                 "leakage_bits", "keys_agree", "capacity_bits_per_use"});
  std::vector<erasure::ProtocolOutcome> outs(
      trials, erasure::ProtocolOutcome(gf::Field::of_order(cfg.q)));
  parallel_trials(trials, [&](std::size_t i) {
    erasure::ErasureConfig t = cfg;
    t.seed = seed0 + i;
    erasure::RunOptions opt;
    opt.compute_leakage = leak;
    outs[i] = erasure::run_protocol(t, opt);
  });
  const double cap =
      erasure::erasure_capacity(cfg.delta, cfg.delta_e, cfg.packet_len, cfg.q);
  for (std::size_t i = 0; i < trials; ++i) {
    const auto& o = outs[i];
    if (!o.keys_agree || (o.leakage_bits && *o.leakage_bits != 0.0))
      throw VerificationError("protocol invariant tripped: agreement or secrecy");
    csv.row({std::to_string(i), std::to_string(seed0 + i),
             std::to_string(o.counts.n_star), std::to_string(o.counts.h),
             std::to_string(o.counts.l), fmt(o.rate_bits_per_use),
             o.leakage_bits ? fmt(*o.leakage_bits) : "", o.keys_agree ? "1" : "0",
             fmt(cap)});
  }
  return csv;
}

det::DetChannelFamily family_from(const json& c) {
  auto ranks64 = c.at("ranks").get<std::vector<std::uint64_t>>();
  std::vector<std::size_t> ranks(ranks64.begin(), ranks64.end());
  const std::size_t L = get_or<std::uint64_t>(c, "L", ranks.back());
  const std::uint32_t q = std::uint32_t(get_or<std::uint64_t>(c, "q", 65536));
  return det::shift_family(L, q, ranks);
}

CsvWriter run_det_sim(const json& c) {
  auto fam = family_from(c);
  auto deltas = get_doubles(c, "deltas");
  const std::size_t m = get_or<std::uint64_t>(c, "m", 3);
  const std::size_t n = get_or<std::uint64_t>(c, "n", 1000);
  const std::uint64_t seed0 = get_or<std::uint64_t>(c, "seed", 0);
  const std::size_t trials = get_or<std::uint64_t>(c, "trials", 1);
  const bool leak = get_or<bool>(c, "leakage", true);
  const double cap = det::det_capacity(fam, deltas);

  CsvWriter csv({"trial", "seed", "rate_bits_per_use", "leakage_bits", "keys_agree",
                 "capacity_bits_per_use"});
  std::vector<std::optional<det::LayeredOutcome>> outs(trials);
  parallel_trials(trials, [&](std::size_t i) {
    erasure::RunOptions opt;
    opt.compute_leakage = leak;
    outs[i] = det::run_layered_protocol(fam, deltas, m, n, seed0 + i, opt);
  });
  for (std::size_t i = 0; i < trials; ++i) {
    const auto& o = *outs[i];
    if (!o.keys_agree || (o.leakage_bits && *o.leakage_bits != 0.0))
      throw VerificationError("protocol invariant tripped: agreement or secrecy");
    csv.row({std::to_string(i), std::to_string(seed0 + i), fmt(o.rate_bits_per_use),
             o.leakage_bits ? fmt(*o.leakage_bits) : "", o.keys_agree ? "1" : "0",
             fmt(cap)});
  }
  return csv;
}

CsvWriter run_det_capacity(const json& c) {
  auto fam = family_from(c);
  auto deltas = get_doubles(c, "deltas");
  CsvWriter csv({"capacity_bits_per_use", "upper_bound_bits_per_use"});
  csv.row({fmt(det::det_capacity(fam, deltas)), fmt(det::det_upper_bound(fam, deltas))});
  return csv;
}

gauss::GainProfile gains_from(const json& c) {
  gauss::GainProfile g;
  for (double db : get_doubles(c, "gains_db")) g.gains.push_back(gauss::db_to_linear(db));
  g.p_max = get_or<double>(c, "p_max", 1.0);
  g.block_len = get_or<std::uint64_t>(c, "L", 1);
  return g;
}

gauss::RateConvention convention_from(const json& c) {
  return get_or<bool>(c, "complex", false) ? gauss::RateConvention::kComplex
                                           : gauss::RateConvention::kReal;
}

CsvWriter run_gauss_optimize(const json& c, json& extra) {
  gauss::GainProfile gains = gains_from(c);
  gauss::StateProfile profile;
  profile.deltas = get_doubles(c, "deltas");
  const auto conv = convention_from(c);
  const double scale =
      double(gains.block_len) * (conv == gauss::RateConvention::kComplex ? 2.0 : 1.0);

  auto cands = kkt::solve_kkt(gains, profile);
  const kkt::KktCandidate* best = &cands.front();
  for (const auto& k : cands) {
    if (k.stationarity_residual > 1e-10)
      throw VerificationError("KKT stationarity residual exceeded 1e-10");
    if (k.rate > best->rate) best = &k;
  }

  auto gains_db = get_doubles(c, "gains_db");
  CsvWriter csv({"layer", "h_db", "power", "interference", "rate_bits", "fraction"});
  auto rates = gauss::layer_rates_interference(best->interference, gains, conv);
  for (std::size_t i = 1; i <= gains.s(); ++i)
    csv.row({std::to_string(i), fmt(gains_db[i]), fmt(best->powers[i - 1]),
             fmt(best->interference[i]), fmt(rates[i - 1]),
             fmt(best->powers[i - 1] / gains.p_max)});
  json jc = json::array();
  for (const auto& k : cands)
    jc.push_back({{"I", k.interference}, {"P", k.powers}, {"rate", k.rate * scale}});
  extra["candidates"] = jc;
  extra["achievable_bits_per_use"] = best->rate * scale;
  return csv;
}

CsvWriter run_gauss_bounds(const json& c) {
  gauss::GainProfile gains = gains_from(c);
  gauss::StateProfile profile;
  profile.deltas = get_doubles(c, "deltas");
  auto row = sweeps::bounds_for(gains, profile, convention_from(c));
  CsvWriter csv({"p_max", "achievable_bits_per_use", "upper_bound_bits_per_use"});
  csv.row({fmt(gains.p_max), fmt(row.achievable), fmt(row.upper_bound)});
  return csv;
}

CsvWriter run_dof(const json& c) {
  gauss::StateProfile profile;
  profile.deltas = get_doubles(c, "deltas");
  auto gammas = get_doubles(c, "gammas");
  const std::size_t L = get_or<std::uint64_t>(c, "L", 1);
  CsvWriter csv({"dof", "dof_upper_route"});
  csv.row({fmt(gauss::dof(profile, gammas, L)), fmt(gauss::dof_upper(profile, gammas, L))});
  return csv;
}

CsvWriter run_example1(const json& c) {
  const double p_max = get_or<double>(c, "p_max", 10.0);
  const std::size_t points = get_or<std::uint64_t>(c, "points", 200);
  auto rows = sweeps::example1(p_max, points, convention_from(c));
  CsvWriter csv({"h1_db", "achievable", "upper_bound"});
  for (const auto& r : rows) {
    if (!(r.achievable <= r.upper_bound))
      throw VerificationError("achievable exceeded the upper bound");
    csv.row({fmt(r.h1_db), fmt(r.achievable), fmt(r.upper_bound)});
  }
  return csv;
}

CsvWriter run_example2(const json& c) {
  const double p_max = get_or<double>(c, "p_max", 10.0);
  const std::size_t grid = get_or<std::uint64_t>(c, "grid", 35);
  auto rows = sweeps::example2(p_max, grid, convention_from(c));
  CsvWriter csv({"g1_db", "g2_db", "achievable", "upper_bound"});
  for (const auto& r : rows) {
    if (!(r.achievable <= r.upper_bound))
      throw VerificationError("achievable exceeded the upper bound");
    csv.row({fmt(r.g1_db), fmt(r.g2_db), fmt(r.achievable), fmt(r.upper_bound)});
  }
  return csv;
}

CsvWriter run_example3(const json& c) {
  std::vector<double> p_maxes = {0.1, 1.0, 10.0, 100.0};
  if (c.contains("p_max")) p_maxes = {c.at("p_max").get<double>()};
  CsvWriter csv({"p_max", "layer", "fraction"});
  for (double pm : p_maxes) {
    auto r = sweeps::example3(pm, convention_from(c));
    double sum = 0;
    for (double f : r.fractions) sum += f;
    if (std::abs(sum - 1.0) > 1e-9)
      throw VerificationError("layer power fractions do not sum to 1");
    for (std::size_t i = 0; i < r.fractions.size(); ++i)
      csv.row({fmt(pm), std::to_string(i + 1), fmt(r.fractions[i])});
  }
  return csv;
}

// ---- main -----------------------------------------------------------------------

int run_kind(const std::string& kind, json config, const std::string& out_path) {
  const auto t0 = std::chrono::steady_clock::now();
  auto diags = validate_config(kind, config);
  if (!diags.empty()) throw ConfigError(std::move(diags));

  json extra = json::object();
  std::optional<CsvWriter> csv;
  if (kind == "erasure-sim")
    csv = run_erasure_sim(config);
  else if (kind == "det-sim")
    csv = run_det_sim(config);
  else if (kind == "det-capacity")
    csv = run_det_capacity(config);
  else if (kind == "gauss-optimize")
    csv = run_gauss_optimize(config, extra);
  else if (kind == "gauss-bounds")
    csv = run_gauss_bounds(config);
  else if (kind == "dof")
    csv = run_dof(config);
  else if (kind == "example1")
    csv = run_example1(config);
  else if (kind == "example2")
    csv = run_example2(config);
  else if (kind == "example3")
    csv = run_example3(config);
  else
    throw ConfigError({"unknown kind: " + kind});

  const std::string out = out_path.empty() ? kind + ".csv" : out_path;
  csv->write(out);

  json sidecar;
  sidecar["kind"] = kind;
  sidecar["config"] = config;
  sidecar["version"] = kVersion;
  sidecar["seed"] = get_or<std::uint64_t>(config, "seed", 0);
  // wall time is process timing, excluded from the determinism guarantee
  sidecar["wall_time_ms"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
          .count();
  for (auto& [k, v] : extra.items()) sidecar[k] = v;
  std::ofstream meta(out + ".meta.json", std::ios::binary);
  meta << sidecar.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"group secret-key generation over broadcast channels"};
  app.require_subcommand(1);

  const std::vector<std::string> kinds = {
      "erasure-sim", "det-sim",  "det-capacity", "gauss-optimize", "gauss-bounds",
      "dof",         "example1", "example2",     "example3"};

  struct SubState {
    CLI::App* sub = nullptr;
    std::string config_path, out;
    std::optional<std::uint64_t> seed, trials, grid, m, n, L, q, points;
    std::optional<double> delta, delta_e, p_max;
    std::vector<double> deltas, gains_db, gammas;
    std::vector<std::uint64_t> ranks;
    bool complex_channel = false, no_leakage = false;
  };
  std::vector<std::shared_ptr<SubState>> subs;

  for (const auto& kind : kinds) {
    auto st = std::make_shared<SubState>();
    st->sub = app.add_subcommand(kind, "run the '" + kind + "' experiment");
    auto* s = st->sub;
    s->add_option("--config", st->config_path, "JSON config file");
    s->add_option("--out", st->out, "output CSV path");
    s->add_option("--seed", st->seed, "base RNG seed");
    s->add_option("--trials", st->trials, "number of monte-carlo trials");
    s->add_option("--grid", st->grid, "sweep grid size");
    s->add_flag("--complex", st->complex_channel,
                "complex channel convention (drop the 1/2 rate factor)");
    s->add_option("--m", st->m, "honest terminal count");
    s->add_option("--n", st->n, "broadcast length");
    s->add_option("--L", st->L, "packet length / block length");
    s->add_option("--q", st->q, "field size");
    s->add_option("--points", st->points, "sweep point count");
    s->add_option("--delta", st->delta, "erasure probability to receivers");
    s->add_option("--delta-e", st->delta_e, "erasure probability to Eve");
    s->add_option("--p-max", st->p_max, "power budget");
    s->add_option("--deltas", st->deltas, "state distribution");
    s->add_option("--gains-db", st->gains_db, "channel gains in dB");
    s->add_option("--gammas", st->gammas, "gain exponents");
    s->add_option("--ranks", st->ranks, "nested family rank sequence");
    s->add_flag("--no-leakage", st->no_leakage,
                "skip the exact leakage computation (diagnostic runs)");
    subs.push_back(st);
  }

  std::string validate_path;
  auto* val = app.add_subcommand("validate", "check a config without executing");
  val->add_option("--config", validate_path, "JSON config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*val) {
      json c = load_config_file(validate_path);
      const std::string kind = get_or<std::string>(c, "kind", "");
      auto diags = kind.empty() ? std::vector<std::string>{"missing field 'kind'"}
                                : validate_config(kind, c);
      for (const auto& d : diags) std::cout << d << '\n';
      return diags.empty() ? 0 : 2;
    }
    for (std::size_t i = 0; i < kinds.size(); ++i) {
      if (!(*subs[i]->sub)) continue;
      const auto& st = *subs[i];
      json config =
          st.config_path.empty() ? json::object() : load_config_file(st.config_path);
      config["kind"] = kinds[i];
      // command-line flags override file values
      if (st.seed) config["seed"] = *st.seed;
      if (st.trials) config["trials"] = *st.trials;
      if (st.grid) config["grid"] = *st.grid;
      if (st.complex_channel) config["complex"] = true;
      if (st.m) config["m"] = *st.m;
      if (st.n) config["n"] = *st.n;
      if (st.L) config["L"] = *st.L;
      if (st.q) config["q"] = *st.q;
      if (st.points) config["points"] = *st.points;
      if (st.delta) config["delta"] = *st.delta;
      if (st.delta_e) config["delta_e"] = *st.delta_e;
      if (st.p_max) config["p_max"] = *st.p_max;
      if (!st.deltas.empty()) config["deltas"] = st.deltas;
      if (!st.gains_db.empty()) config["gains_db"] = st.gains_db;
      if (!st.gammas.empty()) config["gammas"] = st.gammas;
      if (!st.ranks.empty()) config["ranks"] = st.ranks;
      if (st.no_leakage) config["leakage"] = false;
      return run_kind(kinds[i], std::move(config), st.out);
    }
    std::cerr << R"({"error":"no subcommand"})" << '\n';
    return 2;
  } catch (const ConfigError& e) {
    json err = {{"error", "invalid config"}, {"diagnostics", e.diagnostics}};
    std::cerr << err.dump() << '\n';
    return 2;
  } catch (const VerificationError& e) {
    json err = {{"error", "internal verification failure"}, {"detail", e.what()}};
    std::cerr << err.dump() << '\n';
    return 3;
  } catch (const erasure::ProtocolError& e) {
    json err = {{"error", "internal verification failure"}, {"detail", e.what()}};
    std::cerr << err.dump() << '\n';
    return 3;
  } catch (const std::exception& e) {
    json err = {{"error", "invalid config"}, {"detail", e.what()}};
    std::cerr << err.dump() << '\n';
    return 2;
  }
}
