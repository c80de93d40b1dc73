#include "amlnet/logit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "amlnet/error.hpp"

namespace amlnet {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr const char* kInterceptName = "(intercept)";

struct NewtonResult {
  VectorXd beta;
  MatrixXd hessian;  // X'WX at beta
  bool converged = false;
  bool separated = false;
  int iterations = 0;
  std::string diagnostic;
};

VectorXd fitted(const MatrixXd& design, const VectorXd& beta) {
  VectorXd eta = design * beta;
  return eta.unaryExpr([](double z) { return sigmoid(z); });
}

MatrixXd information(const MatrixXd& design, const VectorXd& mu) {
  VectorXd w = mu.array() * (1.0 - mu.array());
  return design.transpose() * w.asDiagonal() * design;
}

NewtonResult newton(const MatrixXd& design, const VectorXd& y,
                    const LogitOptions& opt) {
  const auto p = design.cols();
  const double ybar = y.mean();
  NewtonResult res;
  res.beta = VectorXd::Zero(p);
  res.beta(0) = std::log(ybar / (1.0 - ybar));

  double ll = logit_log_likelihood(design, y, res.beta);
  for (int iter = 1; iter <= opt.max_iterations; ++iter) {
    res.iterations = iter;
    VectorXd mu = fitted(design, res.beta);
    VectorXd grad = design.transpose() * (y - mu);
    MatrixXd h = information(design, mu);
    Eigen::LDLT<MatrixXd> ldlt(h);
    VectorXd step = ldlt.solve(grad);
    const bool usable = ldlt.info() == Eigen::Success && step.allFinite();

    if (grad.lpNorm<Eigen::Infinity>() < opt.score_tolerance) {
      // A converged score with a Newton step that is still large relative
      // to beta means the coefficients are running off to infinity.
      const double scale = std::max(1.0, res.beta.lpNorm<Eigen::Infinity>());
      if (!usable || step.lpNorm<Eigen::Infinity>() > 1e-3 * scale) {
        res.separated = true;
      } else {
        res.converged = true;
      }
      break;
    }
    if (!usable) {
      res.separated = true;
      break;
    }
    // Step halving keeps the log-likelihood nondecreasing.
    double t = 1.0;
    VectorXd candidate = res.beta + step;
    double ll_new = logit_log_likelihood(design, y, candidate);
    for (int half = 0; half < 40 && !(ll_new >= ll - 1e-12 * std::abs(ll));
         ++half) {
      t *= 0.5;
      candidate = res.beta + t * step;
      ll_new = logit_log_likelihood(design, y, candidate);
    }
    res.beta = candidate;
    ll = ll_new;
    if (t * step.lpNorm<Eigen::Infinity>() < opt.step_tolerance) {
      res.converged = true;
      break;
    }
  }
  if (res.separated) {
    res.diagnostic =
        "perfect or quasi-complete separation: coefficients diverge and "
        "fitted probabilities approach 0 or 1";
  } else if (!res.converged) {
    res.diagnostic = fmt::format("no convergence within {} iterations",
                                 opt.max_iterations);
  }
  res.hessian = information(design, fitted(design, res.beta));
  return res;
}

std::vector<double> to_vector(const VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

double normal_two_sided(double z) {
  return std::erfc(std::abs(z) / std::sqrt(2.0));
}

std::string significance_stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

}  // namespace

double akaike(std::size_t k, double log_likelihood) {
  return 2.0 * static_cast<double>(k) - 2.0 * log_likelihood;
}

double bayesian(std::size_t k, std::size_t n, double log_likelihood) {
  return static_cast<double>(k) * std::log(static_cast<double>(n)) -
         2.0 * log_likelihood;
}

double log_likelihood_from_aic(std::size_t k, double aic) {
  return static_cast<double>(k) - aic / 2.0;
}

double bic_from_aic(std::size_t k, std::size_t n, double aic) {
  return bayesian(k, n, log_likelihood_from_aic(k, aic));
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double logit_log_likelihood(const MatrixXd& design, const VectorXd& y,
                            const VectorXd& beta) {
  const VectorXd eta = design * beta;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    // log(1 + e^eta) computed without overflow.
    const double z = eta(i);
    const double log1pexp =
        z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    ll += y(i) * z - log1pexp;
  }
  return ll;
}

VectorXd logit_score(const MatrixXd& design, const VectorXd& y,
                     const VectorXd& beta) {
  return design.transpose() * (y - fitted(design, beta));
}

double null_log_likelihood(const VectorXd& y) {
  const double n = static_cast<double>(y.size());
  const double p = y.mean();
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return n * (p * std::log(p) + (1.0 - p) * std::log(1.0 - p));
}

LogitModel fit_logit(const MatrixXd& predictors, const VectorXd& y,
                     std::vector<std::string> names,
                     const LogitOptions& options) {
  const auto n = predictors.rows();
  const auto k = predictors.cols();
  if (static_cast<std::size_t>(k) != names.size()) {
    throw ValidationError("predictor names and columns disagree in count");
  }
  if (y.size() != n) throw ValidationError("label count differs from rows");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (y(i) != 0.0 && y(i) != 1.0) {
      throw ValidationError("labels must be 0 or 1");
    }
  }
  const double ybar = n > 0 ? y.mean() : 0.0;
  if (n == 0 || ybar <= 0.0 || ybar >= 1.0) {
    throw ValidationError("logit fit needs both label classes present");
  }

  VectorXd mean = VectorXd::Zero(k);
  VectorXd sd = VectorXd::Ones(k);
  if (options.standardize) {
    mean = predictors.colwise().mean().transpose();
    for (Eigen::Index j = 0; j < k; ++j) {
      const double var = (predictors.col(j).array() - mean(j)).square().sum() /
                         std::max<double>(1.0, static_cast<double>(n - 1));
      sd(j) = var > 0.0 ? std::sqrt(var) : 1.0;
    }
  }
  MatrixXd design(n, k + 1);
  design.col(0).setOnes();
  for (Eigen::Index j = 0; j < k; ++j) {
    design.col(j + 1) = (predictors.col(j).array() - mean(j)) / sd(j);
  }

  std::vector<std::string> all_names{kInterceptName};
  all_names.insert(all_names.end(), names.begin(), names.end());

  Eigen::ColPivHouseholderQR<MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < k + 1) {
    std::vector<std::string> collinear;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index i = qr.rank(); i < k + 1; ++i) {
      collinear.push_back(all_names[static_cast<std::size_t>(perm(i))]);
    }
    std::sort(collinear.begin(), collinear.end());
    std::string list;
    for (const auto& c : collinear) list += (list.empty() ? "" : ", ") + c;
    throw ValidationError("rank-deficient design matrix; collinear columns: " +
                          list);
  }

  LogitModel model;
  model.predictor_names = std::move(names);
  model.n = static_cast<std::size_t>(n);
  {
    Eigen::JacobiSVD<MatrixXd> svd(design);
    const auto& s = svd.singularValues();
    model.condition_number = s(s.size() - 1) > 0.0
                                 ? s(0) / s(s.size() - 1)
                                 : std::numeric_limits<double>::infinity();
  }

  const auto fit = newton(design, y, options);
  model.converged = fit.converged;
  model.iterations = fit.iterations;
  model.diagnostic = fit.diagnostic;

  // Back-transform to raw predictor scale: beta_raw = T beta_std.
  MatrixXd transform = MatrixXd::Identity(k + 1, k + 1);
  for (Eigen::Index j = 0; j < k; ++j) {
    transform(j + 1, j + 1) = 1.0 / sd(j);
    transform(0, j + 1) = -mean(j) / sd(j);
  }
  const VectorXd beta_raw = transform * fit.beta;
  model.coefficients = to_vector(beta_raw);
  if (options.standardize) model.standardized_coefficients = to_vector(fit.beta);

  Eigen::LDLT<MatrixXd> ldlt(fit.hessian);
  const MatrixXd cov_std =
      ldlt.solve(MatrixXd::Identity(k + 1, k + 1));
  const MatrixXd cov = transform * cov_std * transform.transpose();
  if (cov.allFinite()) {
    for (Eigen::Index j = 0; j < k + 1; ++j) {
      model.std_errors.push_back(std::sqrt(std::max(0.0, cov(j, j))));
    }
  }

  model.log_likelihood = logit_log_likelihood(design, y, fit.beta);
  {
    const MatrixXd ones = MatrixXd::Ones(n, 1);
    const auto null_fit = newton(ones, y, options);
    model.null_log_likelihood = logit_log_likelihood(ones, y, null_fit.beta);
  }
  model.mcfadden_r2 = 1.0 - model.log_likelihood / model.null_log_likelihood;
  model.aic = akaike(model.parameter_count(), model.log_likelihood);
  model.bic = bayesian(model.parameter_count(), model.n, model.log_likelihood);
  return model;
}

LogitModel fit_logit(std::span<const ClientFeatureRow> rows,
                     std::vector<std::string> predictors,
                     const LogitOptions& options) {
  std::vector<std::size_t> cols;
  for (const auto& name : predictors) {
    auto idx = feature_index(name);
    if (!idx || *idx == 0) {
      throw ValidationError("'" + name + "' is not a predictor column");
    }
    cols.push_back(*idx);
  }
  std::vector<const ClientFeatureRow*> eligible;
  for (const auto& r : rows) {
    if (r.fit_eligible()) eligible.push_back(&r);
  }
  if (eligible.size() < 3) {
    throw ValidationError(fmt::format(
        "logit fit needs at least 3 labeled rows, got {}", eligible.size()));
  }
  MatrixXd x(static_cast<Eigen::Index>(eligible.size()),
             static_cast<Eigen::Index>(cols.size()));
  VectorXd y(static_cast<Eigen::Index>(eligible.size()));
  for (std::size_t i = 0; i < eligible.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    y(ii) = eligible[i]->value(0);
    for (std::size_t j = 0; j < cols.size(); ++j) {
      x(ii, static_cast<Eigen::Index>(j)) = eligible[i]->value(cols[j]);
    }
  }
  return fit_logit(x, y, std::move(predictors), options);
}

double predict(const LogitModel& model, std::span<const double> x) {
  if (x.size() + 1 != model.coefficients.size()) {
    throw ValidationError("predictor vector length does not match model");
  }
  double z = model.coefficients[0];
  for (std::size_t j = 0; j < x.size(); ++j) {
    z += model.coefficients[j + 1] * x[j];
  }
  return sigmoid(z);
}

double predict(const LogitModel& model, const ClientFeatureRow& row) {
  std::vector<double> x;
  x.reserve(model.predictor_names.size());
  for (const auto& name : model.predictor_names) {
    auto idx = feature_index(name);
    if (!idx || *idx == 0) {
      throw ValidationError("model predictor '" + name +
                            "' is not a feature column");
    }
    x.push_back(row.value(*idx));
  }
  return predict(model, x);
}

std::vector<ScoredClient> rank_clients(const LogitModel& model,
                                       std::span<const ClientFeatureRow> rows,
                                       std::size_t top_k) {
  std::vector<ScoredClient> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    out.push_back({row.party_id, predict(model, row), row.high_risk_label});
  }
  std::sort(out.begin(), out.end(),
            [](const ScoredClient& a, const ScoredClient& b) {
              if (a.probability != b.probability) {
                return a.probability > b.probability;
              }
              return a.party_id < b.party_id;
            });
  if (out.size() > top_k) out.resize(top_k);
  return out;
}

std::vector<LogitModel> bundled_models() {
  struct Spec {
    const char* name;
    std::vector<std::pair<const char*, double>> terms;
    double intercept;
    double mcfadden;
    double aic;
    double bic;
  };
  const std::vector<Spec> specs{
      {"paper:model1", {{"missing_id", 0.080}}, -2.157, 0.126, 206.802,
       214.128},
      {"paper:model2",
       {{"geo_in_degree", 0.551}, {"sector_constraint", -1.815}},
       -2.025, 0.132, 207.402, 218.391},
      {"paper:model3",
       {{"txn_all_degree", 0.790}, {"txn_closeness", -0.465}},
       -2.955, 0.167, 199.436, 210.425},
      {"paper:model4",
       {{"missing_id", 0.041},
        {"geo_in_degree", 0.318},
        {"sector_constraint", -2.254},
        {"txn_all_degree", 0.814},
        {"txn_closeness", -0.543}},
       -2.063, 0.327, 168.171, 190.150},
  };
  std::vector<LogitModel> models;
  for (const auto& s : specs) {
    LogitModel m;
    m.name = s.name;
    m.coefficients.push_back(s.intercept);
    for (const auto& [name, coef] : s.terms) {
      m.predictor_names.emplace_back(name);
      m.coefficients.push_back(coef);
    }
    m.n = 288;
    m.aic = s.aic;
    m.bic = s.bic;
    m.mcfadden_r2 = s.mcfadden;
    m.log_likelihood = log_likelihood_from_aic(m.parameter_count(), s.aic);
    m.null_log_likelihood = m.log_likelihood / (1.0 - s.mcfadden);
    m.converged = true;
    m.diagnostic = "published coefficients, rounded to three decimals";
    models.push_back(std::move(m));
  }
  return models;
}

LogitModel load_model(std::string_view spec) {
  if (spec.starts_with("paper:")) {
    for (auto& m : bundled_models()) {
      if (m.name == spec) return m;
    }
    throw ValidationError("unknown bundled model '" + std::string(spec) +
                          "' (use paper:model1 .. paper:model4)");
  }
  const std::filesystem::path path{std::string(spec)};
  if (!std::filesystem::exists(path)) {
    throw ValidationError("model file not found: '" + path.string() + "'");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

std::string model_to_json(const LogitModel& model) {
  nlohmann::ordered_json j;
  j["name"] = model.name;
  j["intercept"] = model.coefficients.at(0);
  if (!model.std_errors.empty()) j["intercept_std_error"] = model.std_errors[0];
  auto preds = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < model.predictor_names.size(); ++i) {
    nlohmann::ordered_json p;
    p["name"] = model.predictor_names[i];
    p["coefficient"] = model.coefficients[i + 1];
    if (!model.std_errors.empty()) p["std_error"] = model.std_errors[i + 1];
    if (!model.standardized_coefficients.empty()) {
      p["standardized_coefficient"] = model.standardized_coefficients[i + 1];
    }
    preds.push_back(p);
  }
  j["predictors"] = preds;
  j["n"] = model.n;
  j["log_likelihood"] = model.log_likelihood;
  j["null_log_likelihood"] = model.null_log_likelihood;
  j["mcfadden_r2"] = model.mcfadden_r2;
  j["aic"] = model.aic;
  j["bic"] = model.bic;
  j["converged"] = model.converged;
  j["iterations"] = model.iterations;
  if (std::isfinite(model.condition_number)) {
    j["condition_number"] = model.condition_number;
  }
  j["diagnostic"] = model.diagnostic;
  return j.dump(2) + "\n";
}

LogitModel model_from_json(std::string_view text) {
  LogitModel m;
  try {
    auto j = nlohmann::json::parse(text);
    m.name = j.value("name", std::string{});
    m.coefficients.push_back(j.at("intercept").get<double>());
    const bool with_se = j.contains("intercept_std_error");
    if (with_se) m.std_errors.push_back(j["intercept_std_error"].get<double>());
    bool with_std = false;
    for (const auto& p : j.at("predictors")) {
      m.predictor_names.push_back(p.at("name").get<std::string>());
      m.coefficients.push_back(p.at("coefficient").get<double>());
      if (with_se) m.std_errors.push_back(p.at("std_error").get<double>());
      if (p.contains("standardized_coefficient")) {
        with_std = true;
        m.standardized_coefficients.push_back(
            p["standardized_coefficient"].get<double>());
      }
    }
    if (with_std) {
      m.standardized_coefficients.insert(m.standardized_coefficients.begin(),
                                         0.0);
    }
    m.n = j.value("n", std::size_t{0});
    m.log_likelihood = j.value("log_likelihood", 0.0);
    m.null_log_likelihood = j.value("null_log_likelihood", 0.0);
    m.mcfadden_r2 = j.value("mcfadden_r2", 0.0);
    m.aic = j.value("aic", 0.0);
    m.bic = j.value("bic", 0.0);
    m.converged = j.value("converged", false);
    m.iterations = j.value("iterations", 0);
    m.condition_number = j.value("condition_number", 0.0);
    m.diagnostic = j.value("diagnostic", std::string{});
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("model file: ") + e.what());
  }
  return m;
}

void write_model_report(std::ostream& out,
                        std::span<const LogitModel> models) {
  std::vector<std::string> rows;
  for (const auto& m : models) {
    for (const auto& name : m.predictor_names) {
      if (std::find(rows.begin(), rows.end(), name) == rows.end()) {
        rows.push_back(name);
      }
    }
  }
  auto cell = [](const LogitModel& m, std::size_t j) {
    std::string s = fmt::format("{:.3f}", m.coefficients[j]);
    if (m.std_errors.size() == m.coefficients.size() && m.std_errors[j] > 0) {
      s += significance_stars(
          normal_two_sided(m.coefficients[j] / m.std_errors[j]));
    }
    return s;
  };
  constexpr int kLabel = 22;
  constexpr int kCol = 16;
  out << fmt::format("{:<{}}", "Variables", kLabel);
  for (const auto& m : models) out << fmt::format("{:>{}}", m.name, kCol);
  out << '\n';
  for (const auto& name : rows) {
    out << fmt::format("{:<{}}", name, kLabel);
    for (const auto& m : models) {
      auto it = std::find(m.predictor_names.begin(), m.predictor_names.end(),
                          name);
      std::string s;
      if (it != m.predictor_names.end()) {
        s = cell(m, static_cast<std::size_t>(it - m.predictor_names.begin()) +
                        1);
      }
      out << fmt::format("{:>{}}", s, kCol);
    }
    out << '\n';
  }
  auto line = [&](const char* label, auto&& get) {
    out << fmt::format("{:<{}}", label, kLabel);
    for (const auto& m : models) out << fmt::format("{:>{}}", get(m), kCol);
    out << '\n';
  };
  line("Constant", [&](const LogitModel& m) { return cell(m, 0); });
  line("McFadden's R2", [](const LogitModel& m) {
    return fmt::format("{:.3f}", m.mcfadden_r2);
  });
  line("N", [](const LogitModel& m) { return fmt::format("{}", m.n); });
  line("AIC", [](const LogitModel& m) { return fmt::format("{:.3f}", m.aic); });
  line("BIC", [](const LogitModel& m) { return fmt::format("{:.3f}", m.bic); });
  line("Converged", [](const LogitModel& m) {
    return std::string(m.converged ? "yes" : "no");
  });
  out << "\n***p<.001; **p<.01; *p<.05\n";
}

void write_model_report_csv(std::ostream& out,
                            std::span<const LogitModel> models) {
  out << "model,term,coefficient,std_error,p_value\n";
  for (const auto& m : models) {
    for (std::size_t j = 0; j < m.coefficients.size(); ++j) {
      const std::string term = j == 0 ? kInterceptName : m.predictor_names[j - 1];
      out << m.name << ',' << term << ',' << fmt::format("{}", m.coefficients[j]);
      if (m.std_errors.size() == m.coefficients.size()) {
        const double se = m.std_errors[j];
        out << fmt::format(",{},{}\n", se,
                           se > 0 ? normal_two_sided(m.coefficients[j] / se)
                                  : 1.0);
      } else {
        out << ",,\n";
      }
    }
    for (auto [term, value] :
         {std::pair{"mcfadden_r2", m.mcfadden_r2}, std::pair{"aic", m.aic},
          std::pair{"bic", m.bic}, std::pair{"log_likelihood", m.log_likelihood},
          std::pair{"n", static_cast<double>(m.n)}}) {
      out << m.name << ',' << term << ',' << fmt::format("{}", value) << ",,\n";
    }
  }
}

}  // namespace amlnet
