#include <doctest.h>

#include <cmath>

#include "bpqr/diagnostics.hpp"
#include "bpqr/errors.hpp"
#include "bpqr/sampler.hpp"
#include "bpqr/simgen.hpp"
#include "support/fixtures.hpp"
#include "support/gir.hpp"
#include "support/oracles.hpp"

using namespace bpqr;

TEST_CASE("Omega inverse: 2x2 example, no random effect, random instances") {
  const Eigen::MatrixXd inv = omega_inverse(1.0, Eigen::VectorXd::Ones(2));
  CHECK(inv(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(inv(1, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(inv(0, 1) == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
  CHECK(omega_dense(1.0, Eigen::VectorXd::Ones(2)) == Eigen::Matrix2d{{2.0, 1.0}, {1.0, 2.0}});

  Eigen::VectorXd d(3);
  d << 0.5, 2.0, 4.0;
  CHECK(omega_inverse(0.0, d) == Eigen::MatrixXd(d.cwiseInverse().asDiagonal()));

  RngStream rng(1);
  for (int rep = 0; rep < 200; ++rep) {
    const auto t = static_cast<Eigen::Index>(1 + rng.uniform_int(0, 14));
    Eigen::VectorXd dd(t);
    for (auto& v : dd) v = 8.0 * (0.01 + rng.exponential());
    const double sig = 3.0 * rng.uniform();
    const Eigen::MatrixXd dense = omega_dense(sig, dd).fullPivLu().inverse();
    CHECK((omega_inverse(sig, dd) - dense).lpNorm<Eigen::Infinity>() < 1e-10);
  }
  CHECK_THROWS_AS(omega_inverse(-1.0, d), DomainError);
}

TEST_CASE("z conditionals: rank-one form matches partitioned dense formulas") {
  RngStream rng(2);
  for (int rep = 0; rep < 300; ++rep) {
    const auto t = static_cast<Eigen::Index>(1 + rng.uniform_int(0, 14));
    Eigen::VectorXd d(t), mu(t), z(t);
    for (Eigen::Index j = 0; j < t; ++j) {
      d[j] = 8.0 * (0.01 + rng.exponential());
      mu[j] = rng.normal();
      z[j] = rng.normal();
    }
    const double sig = 3.0 * rng.uniform();
    const Eigen::MatrixXd omega = omega_dense(sig, d);
    for (Eigen::Index j = 0; j < t; ++j) {
      // Partitioned-matrix conditional computed independently.
      Eigen::MatrixXd perm = Eigen::MatrixXd::Identity(t, t);
      perm.row(0).swap(perm.row(j));
      const Eigen::MatrixXd o = perm * omega * perm.transpose();
      const Eigen::VectorXd dev = perm * (z - mu);
      double mean = mu[j], var = o(0, 0);
      if (t > 1) {
        const Eigen::MatrixXd o22inv = o.bottomRightCorner(t - 1, t - 1).inverse();
        const Eigen::RowVectorXd o12 = o.topRightCorner(1, t - 1);
        mean += (o12 * o22inv * dev.tail(t - 1))(0);
        var -= (o12 * o22inv * o12.transpose())(0);
      }
      const ConditionalMoments r1 = z_conditional_rank_one(sig, d, mu, z, j);
      const ConditionalMoments dn = z_conditional_dense(omega, mu, z, j);
      CHECK(std::abs(r1.mean - mean) < 1e-10);
      CHECK(std::abs(r1.var - var) < 1e-10);
      CHECK(std::abs(dn.mean - mean) < 1e-10);
      CHECK(std::abs(dn.var - var) < 1e-10);
      CHECK(r1.var > 0.0);
    }
  }
}

TEST_CASE("z conditionals: T=2 bivariate closed form and T=1 reduction") {
  RngStream rng(3);
  for (int rep = 0; rep < 100; ++rep) {
    Eigen::VectorXd d(2), mu(2), z(2);
    d << 8.0 * rng.exponential() + 0.1, 8.0 * rng.exponential() + 0.1;
    mu << rng.normal(), rng.normal();
    z << rng.normal(), rng.normal();
    const double s = 2.0 * rng.uniform();
    // Cov = [[s+d1, s], [s, s+d2]].
    const double mean0 = mu[0] + s / (s + d[1]) * (z[1] - mu[1]);
    const double var0 = s + d[0] - s * s / (s + d[1]);
    const ConditionalMoments c = z_conditional_rank_one(s, d, mu, z, 0);
    CHECK(std::abs(c.mean - mean0) < 1e-12);
    CHECK(std::abs(c.var - var0) < 1e-12);
  }
  Eigen::VectorXd d1 = Eigen::VectorXd::Constant(1, 3.0), m1 = Eigen::VectorXd::Constant(1, 0.2);
  const ConditionalMoments c1 = z_conditional_rank_one(1.5, d1, m1, Eigen::VectorXd::Zero(1), 0);
  CHECK(c1.mean == 0.2);
  CHECK(c1.var == 4.5);
}

TEST_CASE("beta (blocked): matches a dense GLS oracle, empty data, and structural reduction") {
  RngStream rng(4);
  for (int rep = 0; rep < 25; ++rep) {
    const PanelData d = fixture::random_panel(rng, {2, 2, 2}, 2, {1});
    const PriorSpec prior = fixture::random_prior(rng, 2, 1);
    const ModelSpec spec = make_model_spec(0.1 + 0.8 * rng.uniform(), prior);
    const ChainState s = fixture::random_state(rng, d, spec);
    const auto own = fixture::owners(d);
    Eigen::VectorXd target(s.z.size());
    for (Eigen::Index r = 0; r < target.size(); ++r) {
      const auto i = static_cast<Eigen::Index>(own[static_cast<std::size_t>(r)]);
      target[r] = s.z[r] - d.mbar.row(i).dot(s.zeta) - s.w[r] * spec.qc.theta;
    }
    const auto ref = oracle::dense_gls(Eigen::MatrixXd(d.x), oracle::dense_error_covariance(d, s, spec.qc.tau_sq, true),
                                       target, prior.beta_cov.inverse(), prior.beta_mean);
    const GaussianMoments m = to_moments(beta_conditional_blocked(s, d, spec), "test");
    CHECK((m.mean - ref.mean).lpNorm<Eigen::Infinity>() < 1e-10);
    CHECK((m.covariance - ref.cov).lpNorm<Eigen::Infinity>() < 1e-10);

    // sigma^2 = 0 and zeta = 0 reduce to the non-blocked form with alpha = 0.
    ChainState r = s;
    r.sigma_alpha_sq = 0.0;
    r.zeta.setZero();
    r.alpha.setZero();
    const GaussianCanonical a = beta_conditional_blocked(r, d, spec);
    const GaussianCanonical b = beta_conditional_nonblocked(r, d, spec);
    CHECK((a.precision - b.precision).lpNorm<Eigen::Infinity>() < 1e-12);
    CHECK((a.linear - b.linear).lpNorm<Eigen::Infinity>() < 1e-12);
  }
  const PriorSpec prior = fixture::random_prior(rng, 3, 2);
  const ModelSpec spec = make_model_spec(0.5, prior);
  const PanelData e = empty_panel({"x2", "x3"}, {1, 2});
  ChainState s = initialize_state(e, spec, rng);
  const GaussianMoments m = to_moments(beta_conditional_blocked(s, e, spec), "test");
  CHECK((m.mean - prior.beta_mean).norm() < 1e-12);
  CHECK((m.covariance - prior.beta_cov).norm() < 1e-12);
}

TEST_CASE("z sweep (blocked): rank-one and dense paths produce the same draws") {
  RngStream rng(5);
  const PanelData d = fixture::random_panel(rng, {1, 2, 5, 15, 9, 3}, 3, {1, 2});
  const ModelSpec spec = make_model_spec(0.3, default_prior(3, 2));
  const ChainState base = fixture::random_state(rng, d, spec);
  for (int rep = 0; rep < 50; ++rep) {
    ChainState a = base, b = base;
    RngStream ra(100 + static_cast<std::uint64_t>(rep)), rb(100 + static_cast<std::uint64_t>(rep));
    update_z_blocked(a, d, spec, ra, ZSweepMethod::rank_one);
    update_z_blocked(b, d, spec, rb, ZSweepMethod::dense);
    CHECK((a.z - b.z).lpNorm<Eigen::Infinity>() < 1e-9);
    CHECK(fixture::sign_coupled(a, d));
  }
}

TEST_CASE("sweeps preserve invariants for both algorithms") {
  RngStream rng(6);
  const PanelData d = fixture::random_panel(rng, {5, 15, 7, 1, 12}, 4, {2, 3});
  for (double p : {0.25, 0.5, 0.75}) {
    const ModelSpec spec = make_model_spec(p, default_prior(4, 2));
    for (Algorithm alg : {Algorithm::nonblocked, Algorithm::blocked}) {
      ChainState s = initialize_state(d, spec, rng);
      for (int it = 0; it < 300; ++it) {
        sweep(alg, s, d, spec, rng);
        REQUIRE(fixture::sign_coupled(s, d));
        REQUIRE(s.sigma_alpha_sq > 0.0);
        REQUIRE((s.w.array() > 0.0).all());
        REQUIRE(s.beta.allFinite());
        REQUIRE(s.alpha.allFinite());
        REQUIRE(s.zeta.size() == 2);
      }
    }
  }
}

TEST_CASE("chain driver: kept draws, determinism, configuration errors") {
  SimSpec sim = default_sim_spec(0.5, 9);
  sim.n = 30;
  const SimOutput out = generate(sim);
  const ModelSpec spec = make_model_spec(0.5, default_prior(4, 2));
  SamplerConfig cfg;
  cfg.iterations = 16000;
  cfg.burn_in = 1000;
  cfg.thin = 10;
  cfg.seed = 3;
  RngStream r1(cfg.seed);
  const PosteriorDraws a = run_chain_blocked(out.data, spec, cfg, r1);
  CHECK(a.size() == 1500);
  CHECK(a.alpha.rows() == 1500);
  CHECK(a.alpha.cols() == 30);
  CHECK((a.sigma_alpha_sq.array() > 0.0).all());
  CHECK(a.algorithm == Algorithm::blocked);
  CHECK(a.parameter_names().size() == 7);
  CHECK(a.zeta_names == std::vector<std::string>{"zeta_x3", "zeta_x4"});

  cfg.iterations = 2000;
  cfg.burn_in = 500;
  cfg.thin = 3;
  for (Algorithm alg : {Algorithm::nonblocked, Algorithm::blocked}) {
    cfg.algorithm = alg;
    RngStream s1(cfg.seed), s2(cfg.seed), s3(cfg.seed + 1);
    const PosteriorDraws x = run_chain(out.data, spec, cfg, s1);
    const PosteriorDraws y = run_chain(out.data, spec, cfg, s2);
    const PosteriorDraws z = run_chain(out.data, spec, cfg, s3);
    CHECK(x.size() == 500);
    CHECK(x.beta == y.beta);
    CHECK(x.zeta == y.zeta);
    CHECK(x.sigma_alpha_sq == y.sigma_alpha_sq);
    CHECK(x.alpha == y.alpha);
    CHECK(x.beta != z.beta);
  }

  cfg.store_alpha = false;
  RngStream s4(1);
  CHECK_FALSE(run_chain(out.data, spec, cfg, s4).has_alpha());

  cfg.burn_in = cfg.iterations;
  RngStream s5(1);
  CHECK_THROWS_AS(run_chain_nonblocked(out.data, spec, cfg, s5), ConfigError);
  CHECK_THROWS_AS(run_chain_blocked(out.data, spec, cfg, s5), ConfigError);
}

TEST_CASE("scaled-down replication: beta_2 recovered within 3 posterior std (n=100)") {
  SimSpec sim = default_sim_spec(0.5, 2024);
  sim.n = 100;
  const SimOutput small = generate(sim);
  const ModelSpec spec = make_model_spec(0.5, default_prior(4, 2));
  for (Algorithm alg : {Algorithm::nonblocked, Algorithm::blocked}) {
    SamplerConfig cfg;
    cfg.iterations = 10000;
    cfg.burn_in = 1000;
    cfg.thin = 1;
    cfg.algorithm = alg;
    cfg.store_alpha = false;
    RngStream rng(17);
    const PosteriorDraws dr = run_chain(small.data, spec, cfg, rng);
    const Eigen::VectorXd b2 = dr.beta.col(1);
    const std::span<const double> s(b2.data(), static_cast<std::size_t>(b2.size()));
    INFO(to_string(alg) << " beta_2 mean " << mean(s) << " std " << stddev(s));
    CHECK(std::abs(mean(s) - 1.0) < 3.0 * stddev(s));
  }
}

TEST_CASE("stationarity: one sweep from an exact joint draw preserves the prior marginals") {
  // Parameters drawn from the prior with data generated from them form an
  // exact draw from the joint; one sweep keeps the parameter marginal equal
  // to the prior.
  const std::size_t reps = 10'000;
  for (Algorithm alg : {Algorithm::nonblocked, Algorithm::blocked}) {
    RngStream rng(alg == Algorithm::blocked ? 71 : 72);
    gir::Setup setup = gir::make_setup(20, 3, 0.3, rng);
    ChainState st;
    st.alpha = Eigen::VectorXd::Zero(20);
    st.w = Eigen::VectorXd::Ones(60);
    st.z = Eigen::VectorXd::Zero(60);
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(4), sum2 = Eigen::VectorXd::Zero(4);
    for (std::size_t r = 0; r < reps; ++r) {
      gir::draw_prior(st, setup.prior, setup.spec, rng);
      gir::generate_latent(st, setup.data, setup.spec, rng);
      sweep(alg, st, setup.data, setup.spec, rng);
      Eigen::VectorXd v(4);
      v << st.beta, st.zeta, st.sigma_alpha_sq;
      sum += v;
      sum2 += v.cwiseProduct(v);
    }
    const double n = static_cast<double>(reps);
    const Eigen::VectorXd m = sum / n;
    Eigen::VectorXd true_mean(4), true_var(4);
    true_mean << setup.prior.beta_mean, setup.prior.zeta_mean, 4.5 / 4.0;
    true_var << setup.prior.beta_cov.diagonal(), setup.prior.zeta_cov.diagonal(), 4.5 * 4.5 / 48.0;
    for (int j = 0; j < 4; ++j) {
      INFO(to_string(alg) << " component " << j);
      CHECK(std::abs(m[j] - true_mean[j]) < 4.0 * std::sqrt(true_var[j] / n));
      const double second = sum2[j] / n;
      const double true_second = true_var[j] + true_mean[j] * true_mean[j];
      // Loose bound on Var(x^2) via 4th moment of a normal with this mean/var
      // (sigma^2 uses its IG 4th raw moment).
      const double e4 = j < 3 ? std::pow(true_mean[j], 4) + 6 * true_mean[j] * true_mean[j] * true_var[j] +
                                    3 * true_var[j] * true_var[j]
                              : std::pow(4.5, 4) / 24.0;
      CHECK(std::abs(second - true_second) < 4.0 * std::sqrt((e4 - true_second * true_second) / n));
    }
  }
}

TEST_CASE("getting it right (reduced length) for both algorithms") {
  for (Algorithm alg : {Algorithm::nonblocked, Algorithm::blocked}) {
    const gir::Result res = gir::run(alg, 20, 3, 0.3, 40'000, 5150);
    for (const auto& row : res.rows) {
      INFO(to_string(alg) << " " << row.name << " marginal " << row.marginal_mean << " successive "
                          << row.successive_mean << " z " << row.z);
      CHECK(std::abs(row.z) < 4.0);
    }
  }
}
