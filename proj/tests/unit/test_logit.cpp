#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "amlnet/error.hpp"
#include "amlnet/features.hpp"
#include "amlnet/logit.hpp"
#include "amlnet/rng.hpp"

using namespace amlnet;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

struct Draw {
  MatrixXd x;
  VectorXd y;
};

Draw draw(Rng& rng, std::size_t n, const std::vector<double>& beta) {
  const auto k = static_cast<Eigen::Index>(beta.size() - 1);
  Draw d{MatrixXd(static_cast<Eigen::Index>(n), k),
         VectorXd(static_cast<Eigen::Index>(n))};
  for (Eigen::Index i = 0; i < d.x.rows(); ++i) {
    double z = beta[0];
    for (Eigen::Index j = 0; j < k; ++j) {
      d.x(i, j) = rng.normal();
      z += beta[static_cast<std::size_t>(j + 1)] * d.x(i, j);
    }
    d.y(i) = rng.uniform() < 1.0 / (1.0 + std::exp(-z)) ? 1.0 : 0.0;
  }
  return d;
}

MatrixXd with_intercept(const MatrixXd& x) {
  MatrixXd d(x.rows(), x.cols() + 1);
  d.col(0).setOnes();
  d.rightCols(x.cols()) = x;
  return d;
}

}  // namespace

TEST_CASE("information criteria reproduce the published BIC") {
  CHECK(std::abs(bic_from_aic(2, 288, 206.802) - 214.128) <= 0.01);
  CHECK(std::abs(bic_from_aic(3, 288, 199.436) - 210.425) <= 0.01);
  CHECK(std::abs(bic_from_aic(6, 288, 168.171) - 190.150) <= 0.01);
  CHECK(log_likelihood_from_aic(6, 168.171) ==
        doctest::Approx(-78.0855).epsilon(1e-6));
  CHECK(akaike(6, -78.0855) == doctest::Approx(168.171));
}

TEST_CASE("bundled models are internally consistent") {
  const auto models = bundled_models();
  REQUIRE(models.size() == 4);
  for (const auto& m : models) {
    CHECK(m.n == 288);
    CHECK(akaike(m.parameter_count(), m.log_likelihood) ==
          doctest::Approx(m.aic).epsilon(1e-12));
    CHECK(std::abs(bayesian(m.parameter_count(), m.n, m.log_likelihood) - m.bic) <=
          0.01);
    CHECK(1.0 - m.log_likelihood / m.null_log_likelihood ==
          doctest::Approx(m.mcfadden_r2));
  }
}

TEST_CASE("analytic gradient matches central differences") {
  Rng rng(314);
  const auto d = draw(rng, 200, {-0.5, 1.0, -0.7, 0.3});
  const MatrixXd design = with_intercept(d.x);
  const double h = 1e-5;
  for (int trial = 0; trial < 20; ++trial) {
    VectorXd beta(4);
    for (Eigen::Index j = 0; j < 4; ++j) beta(j) = rng.uniform(-2, 2);
    const VectorXd g = logit_score(design, d.y, beta);
    for (Eigen::Index j = 0; j < 4; ++j) {
      VectorXd up = beta, down = beta;
      up(j) += h;
      down(j) -= h;
      const double fd = (logit_log_likelihood(design, d.y, up) -
                         logit_log_likelihood(design, d.y, down)) /
                        (2 * h);
      CHECK(std::abs(fd - g(j)) <= 1e-6 * std::max(1.0, std::abs(g(j))));
    }
  }
}

TEST_CASE("coefficients are recovered within three standard errors") {
  Rng rng(2718);
  const std::vector<double> truth{-1.0, 0.5, 2.0};
  const auto d = draw(rng, 5000, truth);
  const auto m = fit_logit(d.x, d.y, {"x1", "x2"});
  REQUIRE(m.converged);
  REQUIRE(m.std_errors.size() == 3);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(std::abs(m.coefficients[j] - truth[j]) <= 3 * m.std_errors[j]);
  }
  CHECK(m.mcfadden_r2 > 0.0);
  CHECK(m.mcfadden_r2 < 1.0);
  CHECK(m.aic == doctest::Approx(akaike(3, m.log_likelihood)).epsilon(1e-15));
  CHECK(m.bic ==
        doctest::Approx(bayesian(3, 5000, m.log_likelihood)).epsilon(1e-15));
  CHECK(m.condition_number >= 1.0);
}

TEST_CASE("null log-likelihood equals the closed form") {
  Rng rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const auto d = draw(rng, 300, {rng.uniform(-2, 1), 1.0});
    const auto m = fit_logit(d.x, d.y, {"x"});
    const double p = d.y.mean();
    const double closed = 300 * (p * std::log(p) + (1 - p) * std::log(1 - p));
    CHECK(std::abs(m.null_log_likelihood - closed) <= 1e-9);
    CHECK(null_log_likelihood(d.y) == doctest::Approx(closed).epsilon(1e-14));
  }
}

TEST_CASE("fits are invariant to row order") {
  Rng rng(8);
  const auto d = draw(rng, 400, {0.2, -1.0, 0.8});
  std::vector<Eigen::Index> perm(400);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = perm.size(); i > 1; --i) {
    std::swap(perm[i - 1], perm[rng.below(i)]);
  }
  MatrixXd x(400, 2);
  VectorXd y(400);
  for (Eigen::Index i = 0; i < 400; ++i) {
    x.row(i) = d.x.row(perm[static_cast<std::size_t>(i)]);
    y(i) = d.y(perm[static_cast<std::size_t>(i)]);
  }
  const auto a = fit_logit(d.x, d.y, {"a", "b"});
  const auto b = fit_logit(x, y, {"a", "b"});
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(a.coefficients[j] == doctest::Approx(b.coefficients[j]).epsilon(1e-10));
  }
}

TEST_CASE("standardized fits report both scales") {
  Rng rng(12);
  auto d = draw(rng, 500, {-0.5, 0.8, -0.4});
  d.x.col(0) = d.x.col(0) * 1000.0 + VectorXd::Constant(500, 50.0);
  const auto raw = fit_logit(d.x, d.y, {"a", "b"});
  LogitOptions opt;
  opt.standardize = true;
  const auto z = fit_logit(d.x, d.y, {"a", "b"}, opt);
  REQUIRE(z.standardized_coefficients.size() == 3);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(z.coefficients[j] == doctest::Approx(raw.coefficients[j]).epsilon(1e-7));
    CHECK(z.std_errors[j] == doctest::Approx(raw.std_errors[j]).epsilon(1e-6));
  }
  CHECK(z.log_likelihood == doctest::Approx(raw.log_likelihood).epsilon(1e-12));
}

TEST_CASE("perfect separation is reported, not thrown") {
  MatrixXd x(8, 1);
  VectorXd y(8);
  for (Eigen::Index i = 0; i < 8; ++i) {
    x(i, 0) = static_cast<double>(i);
    y(i) = i < 4 ? 0.0 : 1.0;
  }
  const auto m = fit_logit(x, y, {"x"});
  CHECK_FALSE(m.converged);
  CHECK(m.diagnostic.find("separation") != std::string::npos);
}

TEST_CASE("rank deficiency names the collinear columns") {
  Rng rng(3);
  auto d = draw(rng, 100, {0.0, 1.0, 1.0});
  MatrixXd x(100, 3);
  x << d.x, d.x.col(0) * 2.0;
  try {
    fit_logit(x, d.y, {"alpha", "beta", "alpha_twice"});
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("collinear columns: alpha") != std::string::npos);
  }
}

TEST_CASE("row-based fits need labels") {
  std::vector<ClientFeatureRow> rows(5);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].party_id = fmt::format("P{}", i);
    rows[i].missing_id = static_cast<double>(i);
  }
  rows[0].high_risk_label = RiskLabel::Positive;
  rows[1].high_risk_label = RiskLabel::Negative;
  CHECK_THROWS_AS(fit_logit(rows, {"missing_id"}), ValidationError);
  CHECK_THROWS_AS(fit_logit(rows, {"high_risk"}), ValidationError);
  CHECK_THROWS_AS(fit_logit(rows, {"shoe_size"}), ValidationError);
}

TEST_CASE("prediction") {
  const auto m4 = load_model("paper:model4");
  ClientFeatureRow zero;
  CHECK(std::abs(predict(m4, zero) - 0.1127) <= 1e-4);
  CHECK(predict(m4, zero) == doctest::Approx(1.0 / (1.0 + std::exp(2.063))));

  LogitModel flat;
  flat.predictor_names = {"missing_id", "txn_all_degree"};
  flat.coefficients = {0.0, 0.0, 0.0};
  ClientFeatureRow any;
  any.missing_id = 7;
  any.transactions.all_degree = 12;
  CHECK(predict(flat, any) == 0.5);

  // Monotone in a positive-coefficient predictor.
  double last = 0.0;
  for (int d = 0; d < 20; ++d) {
    ClientFeatureRow r;
    r.transactions.all_degree = d;
    const double p = predict(m4, r);
    CHECK(p > last);
    last = p;
  }

  // sigma(-z) = 1 - sigma(z).
  Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    LogitModel m;
    m.predictor_names = {"missing_id"};
    m.coefficients = {rng.uniform(-3, 3), rng.uniform(-3, 3)};
    LogitModel neg = m;
    for (auto& c : neg.coefficients) c = -c;
    ClientFeatureRow r;
    r.missing_id = rng.uniform(0, 5);
    CHECK(predict(m, r) + predict(neg, r) == doctest::Approx(1.0).epsilon(1e-14));
  }

  LogitModel missing;
  missing.predictor_names = {"not_a_column"};
  missing.coefficients = {0.0, 1.0};
  CHECK_THROWS_AS(predict(missing, zero), ValidationError);
}

TEST_CASE("ranking order, ties and truncation") {
  LogitModel m;
  m.predictor_names = {"missing_id"};
  m.coefficients = {0.0, 1.0};
  std::vector<ClientFeatureRow> rows(4);
  const char* ids[] = {"D", "B", "C", "A"};
  const double x[] = {2.0, -2.0, 1.0, 1.0};
  for (std::size_t i = 0; i < 4; ++i) {
    rows[i].party_id = ids[i];
    rows[i].missing_id = x[i];
  }
  const auto top = rank_clients(m, rows, 1);
  REQUIRE(top.size() == 1);
  CHECK(top[0].party_id == "D");
  const auto all = rank_clients(m, rows, 100);
  REQUIRE(all.size() == 4);
  CHECK(all[1].party_id == "A");
  CHECK(all[2].party_id == "C");
  CHECK(all[3].party_id == "B");
}

TEST_CASE("model files round-trip") {
  Rng rng(10);
  const auto d = draw(rng, 300, {0.1, 0.4});
  auto m = fit_logit(d.x, d.y, {"missing_id"});
  m.name = "fitted";
  const auto back = model_from_json(model_to_json(m));
  CHECK(back.name == m.name);
  CHECK(back.predictor_names == m.predictor_names);
  CHECK(back.coefficients == m.coefficients);
  CHECK(back.std_errors == m.std_errors);
  CHECK(back.n == m.n);
  CHECK(back.log_likelihood == m.log_likelihood);
  CHECK(back.aic == m.aic);
  CHECK(back.converged == m.converged);
  CHECK_THROWS_AS(model_from_json("{\"name\": 3}"), ValidationError);
  CHECK_THROWS_AS(load_model("paper:model9"), ValidationError);
  CHECK_THROWS_AS(load_model("/nonexistent/model.json"), ValidationError);
}

TEST_CASE("model report layout") {
  const auto models = bundled_models();
  std::ostringstream text;
  write_model_report(text, models);
  const auto s = text.str();
  CHECK(s.find("McFadden") != std::string::npos);
  CHECK(s.find("AIC") != std::string::npos);
  CHECK(s.find("206.802") != std::string::npos);
  CHECK(s.find("-2.063") != std::string::npos);
  std::ostringstream csv;
  write_model_report_csv(csv, models);
  CHECK(csv.str().find("txn_all_degree") != std::string::npos);
}
