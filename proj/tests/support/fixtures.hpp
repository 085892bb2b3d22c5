#pragma once

// Small randomly generated panels and chain states for white-box tests.

#include <cmath>
#include <numeric>
#include <vector>

#include "bpqr/model.hpp"
#include "bpqr/panel.hpp"
#include "bpqr/rng.hpp"

namespace bpqr::fixture {

/// Panel with the given per-individual lengths, k columns (intercept plus
/// k-1 standard-normal covariates) and the listed Mundlak columns.
inline PanelData random_panel(RngStream& rng, const std::vector<std::size_t>& lengths,
                              std::size_t k, const std::vector<std::size_t>& mundlak) {
  PanelData d;
  d.column_names.push_back("(Intercept)");
  for (std::size_t c = 1; c < k; ++c) d.column_names.push_back("x" + std::to_string(c + 1));
  const std::size_t total = std::accumulate(lengths.begin(), lengths.end(), std::size_t{0});
  d.x.resize(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(k));
  std::size_t row = 0;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    d.ids.push_back(std::to_string(i + 1));
    for (std::size_t t = 0; t < lengths[i]; ++t, ++row) {
      d.periods.push_back(static_cast<long>(t + 1));
      d.y.push_back(rng.uniform() < 0.5 ? 1 : 0);
      d.x(static_cast<Eigen::Index>(row), 0) = 1.0;
      for (std::size_t c = 1; c < k; ++c) d.x(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c)) = rng.normal();
    }
    d.offsets.push_back(row);
  }
  d.mundlak_cols = mundlak;
  compute_mundlak_means(d);
  return d;
}

/// Arbitrary valid chain state (sign-coupled z, positive w).
inline ChainState random_state(RngStream& rng, const PanelData& d, const ModelSpec& spec) {
  ChainState s;
  s.beta = Eigen::VectorXd(spec.k());
  for (auto& v : s.beta) v = rng.normal();
  s.zeta = Eigen::VectorXd(spec.q());
  for (auto& v : s.zeta) v = rng.normal();
  s.alpha = Eigen::VectorXd(static_cast<Eigen::Index>(d.num_individuals()));
  for (auto& v : s.alpha) v = rng.normal();
  s.sigma_alpha_sq = 0.3 + 2.0 * rng.uniform();
  const auto t = static_cast<Eigen::Index>(d.num_observations());
  s.w = Eigen::VectorXd(t);
  s.z = Eigen::VectorXd(t);
  for (Eigen::Index r = 0; r < t; ++r) {
    s.w[r] = 0.05 + rng.exponential();
    const double m = 0.1 + std::abs(rng.normal());
    s.z[r] = d.y[static_cast<std::size_t>(r)] == 1 ? m : -m;
  }
  return s;
}

/// Proper prior with random means and SPD covariances.
inline PriorSpec random_prior(RngStream& rng, Eigen::Index k, Eigen::Index q) {
  PriorSpec p;
  p.beta_mean = Eigen::VectorXd(k);
  for (auto& v : p.beta_mean) v = rng.normal();
  Eigen::MatrixXd a(k, k);
  for (auto& v : a.reshaped()) v = rng.normal();
  p.beta_cov = a * a.transpose() + Eigen::MatrixXd::Identity(k, k);
  p.zeta_mean = Eigen::VectorXd(q);
  for (auto& v : p.zeta_mean) v = rng.normal();
  Eigen::MatrixXd b(q, q);
  for (auto& v : b.reshaped()) v = rng.normal();
  p.zeta_cov = b * b.transpose() + Eigen::MatrixXd::Identity(q, q);
  p.c1 = 10.0;
  p.d1 = 9.0;
  return p;
}

inline std::vector<std::size_t> owners(const PanelData& d) {
  std::vector<std::size_t> o(d.num_observations());
  for (std::size_t i = 0; i < d.num_individuals(); ++i) {
    for (std::size_t r = d.begin(i); r < d.end(i); ++r) o[r] = i;
  }
  return o;
}

inline bool sign_coupled(const ChainState& s, const PanelData& d) {
  for (std::size_t r = 0; r < d.num_observations(); ++r) {
    const double z = s.z[static_cast<Eigen::Index>(r)];
    if ((z > 0.0) != (d.y[r] == 1)) return false;
  }
  return true;
}

}  // namespace bpqr::fixture
