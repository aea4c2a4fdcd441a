// Python bindings for the main operations: protocol simulation, capacity
// formulas, bounds, and the power-allocation solver.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "skg/deterministic.hpp"
#include "skg/erasure.hpp"
#include "skg/gauss.hpp"
#include "skg/kkt.hpp"
#include "skg/secure_coding.hpp"

namespace py = pybind11;
using namespace skg;

namespace {

gauss::GainProfile make_gains(const std::vector<double>& gains, double p_max,
                              std::size_t block_len) {
  gauss::GainProfile g;
  g.gains = gains;
  g.p_max = p_max;
  g.block_len = block_len;
  return g;
}

gauss::StateProfile make_profile(const std::vector<double>& deltas) {
  gauss::StateProfile p;
  p.deltas = deltas;
  return p;
}

gauss::RateConvention conv(bool complex_channel) {
  return complex_channel ? gauss::RateConvention::kComplex
                         : gauss::RateConvention::kReal;
}

py::dict outcome_to_dict(const erasure::ProtocolOutcome& o) {
  py::dict d;
  d["n_star"] = o.counts.n_star;
  d["h"] = o.counts.h;
  d["h_i"] = o.counts.h_i;
  d["l"] = o.counts.l;
  d["rate_bits_per_use"] = o.rate_bits_per_use;
  d["keys_agree"] = o.keys_agree;
  if (o.leakage_bits) d["leakage_bits"] = *o.leakage_bits;
  d["mds_subsets"] = o.mds_subsets;
  d["random_subsets"] = o.random_subsets;
  return d;
}

py::dict candidate_to_dict(const kkt::KktCandidate& c) {
  py::dict d;
  d["I"] = c.interference;
  d["P"] = c.powers;
  d["lambdas"] = c.multipliers;
  d["rate"] = c.rate;
  d["stationarity_residual"] = c.stationarity_residual;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "group secret-key generation over broadcast channels";

  m.def("db_to_linear", &gauss::db_to_linear, py::arg("db"));

  m.def(
      "erasure_capacity",
      [](double delta, double delta_e, std::size_t L, std::uint32_t q) {
        return erasure::erasure_capacity(delta, delta_e, L, q);
      },
      py::arg("delta"), py::arg("delta_e"), py::arg("L") = 16,
      py::arg("q") = 65536,
      "Secret-key capacity (1 - delta) * delta_e * L * log2(q) of the erasure "
      "broadcast channel, bits per channel use.");

  m.def(
      "run_erasure",
      [](std::size_t m_, std::size_t n, std::size_t L, std::uint32_t q, double delta,
         double delta_e, std::uint64_t seed, bool compute_leakage) {
        erasure::ErasureConfig c;
        c.m = m_;
        c.n = n;
        c.packet_len = L;
        c.q = q;
        c.delta = delta;
        c.delta_e = delta_e;
        c.seed = seed;
        erasure::RunOptions opt;
        opt.compute_leakage = compute_leakage;
        return outcome_to_dict(erasure::run_protocol(c, opt));
      },
      py::arg("m") = 3, py::arg("n") = 1000, py::arg("L") = 16,
      py::arg("q") = 65536, py::arg("delta") = 0.5, py::arg("delta_e") = 0.5,
      py::arg("seed") = 0, py::arg("compute_leakage") = true,
      "One full protocol run; returns counts, rate, agreement, and the exact "
      "rank-based leakage.");

  m.def(
      "det_capacity",
      [](const std::vector<std::size_t>& ranks, const std::vector<double>& deltas,
         std::uint32_t q) {
        auto fam = det::shift_family(ranks.back(), q, ranks);
        return det::det_capacity(fam, deltas);
      },
      py::arg("ranks"), py::arg("deltas"), py::arg("q") = 65536);

  m.def(
      "det_upper_bound",
      [](const std::vector<std::size_t>& ranks, const std::vector<double>& deltas,
         std::uint32_t q) {
        auto fam = det::shift_family(ranks.back(), q, ranks);
        return det::det_upper_bound(fam, deltas);
      },
      py::arg("ranks"), py::arg("deltas"), py::arg("q") = 65536);

  m.def(
      "run_deterministic",
      [](const std::vector<std::size_t>& ranks, const std::vector<double>& deltas,
         std::size_t m_, std::size_t n, std::uint64_t seed, std::uint32_t q,
         bool compute_leakage) {
        auto fam = det::shift_family(ranks.back(), q, ranks);
        erasure::RunOptions opt;
        opt.compute_leakage = compute_leakage;
        auto out = det::run_layered_protocol(fam, deltas, m_, n, seed, opt);
        py::dict d;
        d["rate_bits_per_use"] = out.rate_bits_per_use;
        d["keys_agree"] = out.keys_agree;
        if (out.leakage_bits) d["leakage_bits"] = *out.leakage_bits;
        d["layer_dims"] = out.layer_dims;
        py::list layers;
        for (const auto& lay : out.layers) layers.append(outcome_to_dict(lay));
        d["layers"] = layers;
        return d;
      },
      py::arg("ranks"), py::arg("deltas"), py::arg("m") = 3, py::arg("n") = 1000,
      py::arg("seed") = 0, py::arg("q") = 65536, py::arg("compute_leakage") = true,
      "Layered protocol over the nested deterministic channel given by a "
      "coordinate-selection rank sequence.");

  m.def(
      "layer_rates",
      [](const std::vector<double>& powers, const std::vector<double>& gains,
         bool complex_channel) {
        gauss::PowerAllocation a;
        a.powers = powers;
        return gauss::layer_rates(a, make_gains(gains, 1.0, 1), conv(complex_channel));
      },
      py::arg("powers"), py::arg("gains"), py::arg("complex_channel") = false,
      "Wiretap layer rates in bits per symbol for linear-scale gains.");

  m.def(
      "achievable_rate",
      [](const std::vector<double>& powers, const std::vector<double>& gains,
         const std::vector<double>& deltas, std::size_t L, bool complex_channel) {
        gauss::PowerAllocation a;
        a.powers = powers;
        return gauss::achievable_rate(a, make_gains(gains, 1.0, L),
                                      make_profile(deltas), conv(complex_channel));
      },
      py::arg("powers"), py::arg("gains"), py::arg("deltas"), py::arg("L") = 1,
      py::arg("complex_channel") = false);

  m.def(
      "upper_bound",
      [](const std::vector<double>& gains, double p_max,
         const std::vector<double>& deltas, std::size_t L, bool complex_channel) {
        return gauss::gauss_upper_bound(make_gains(gains, p_max, L),
                                        make_profile(deltas), conv(complex_channel));
      },
      py::arg("gains"), py::arg("p_max"), py::arg("deltas"), py::arg("L") = 1,
      py::arg("complex_channel") = false,
      "Public-discussion upper bound on the secret-key capacity.");

  m.def(
      "dof",
      [](const std::vector<double>& deltas, const std::vector<double>& gammas,
         std::size_t L) { return gauss::dof(make_profile(deltas), gammas, L); },
      py::arg("deltas"), py::arg("gammas"), py::arg("L") = 1);

  m.def(
      "dof_upper",
      [](const std::vector<double>& deltas, const std::vector<double>& gammas,
         std::size_t L) { return gauss::dof_upper(make_profile(deltas), gammas, L); },
      py::arg("deltas"), py::arg("gammas"), py::arg("L") = 1);

  m.def(
      "solve_kkt",
      [](const std::vector<double>& gains, const std::vector<double>& deltas,
         double p_max) {
        auto cands = kkt::solve_kkt(make_gains(gains, p_max, 1), make_profile(deltas));
        py::list out;
        for (const auto& c : cands) out.append(candidate_to_dict(c));
        return out;
      },
      py::arg("gains"), py::arg("deltas"), py::arg("p_max"),
      "Every solution of the KKT system for the layer power allocation.");

  m.def(
      "optimize_power",
      [](const std::vector<double>& gains, const std::vector<double>& deltas,
         double p_max) {
        return candidate_to_dict(
            kkt::optimize(make_gains(gains, p_max, 1), make_profile(deltas)));
      },
      py::arg("gains"), py::arg("deltas"), py::arg("p_max"),
      "The rate-maximizing KKT candidate.");

  m.def(
      "grid_oracle",
      [](const std::vector<double>& gains, const std::vector<double>& deltas,
         double p_max, std::size_t steps) {
        auto r = kkt::grid_oracle(make_gains(gains, p_max, 1), make_profile(deltas),
                                  steps);
        py::dict d;
        d["P"] = r.alloc.powers;
        d["rate"] = r.rate;
        return d;
      },
      py::arg("gains"), py::arg("deltas"), py::arg("p_max"), py::arg("steps") = 2000);

  m.def(
      "mds_generator",
      [](std::size_t n, std::size_t n_e, std::uint32_t q) {
        auto a =
            coding::mds_secure_generator({n, n_e, gf::Field::of_order(q)});
        std::vector<std::vector<std::uint32_t>> rows(a.rows());
        for (std::size_t i = 0; i < a.rows(); ++i)
          for (std::size_t j = 0; j < a.cols(); ++j) rows[i].push_back(a.at(i, j));
        return rows;
      },
      py::arg("n"), py::arg("n_e"), py::arg("q"),
      "Reed-Solomon generator whose rows stay independent of any n_e "
      "overheard packets.");

  m.def(
      "matrix_rank",
      [](const std::vector<std::vector<std::uint32_t>>& rows, std::uint32_t q) {
        const std::size_t r = rows.size();
        const std::size_t c = r ? rows[0].size() : 0;
        gf::Matrix m_(gf::Field::of_order(q), r, c);
        for (std::size_t i = 0; i < r; ++i) {
          if (rows[i].size() != c)
            throw std::invalid_argument("ragged matrix");
          for (std::size_t j = 0; j < c; ++j)
            m_.at(i, j) = std::uint16_t(rows[i][j]);
        }
        return gf::rank(m_);
      },
      py::arg("rows"), py::arg("q"), "Exact rank over GF(q).");

  m.attr("__version__") = "0.1.0";
}
