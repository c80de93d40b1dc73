#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "amlnet/features.hpp"

namespace amlnet {

struct LogitModel {
  std::string name;
  std::vector<std::string> predictor_names;
  /// coefficients[0] is the intercept, then one per predictor.
  std::vector<double> coefficients;
  std::vector<double> std_errors;  // empty when unknown
  /// Coefficients on z-scored predictors, when fitted with standardization.
  std::vector<double> standardized_coefficients;
  std::size_t n = 0;
  double log_likelihood = 0.0;
  double null_log_likelihood = 0.0;
  double mcfadden_r2 = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  bool converged = false;
  int iterations = 0;
  double condition_number = 0.0;
  std::string diagnostic;

  std::size_t parameter_count() const { return coefficients.size(); }
};

struct LogitOptions {
  int max_iterations = 100;
  double score_tolerance = 1e-8;
  double step_tolerance = 1e-10;
  bool standardize = false;
};

double akaike(std::size_t k, double log_likelihood);
double bayesian(std::size_t k, std::size_t n, double log_likelihood);
/// BIC implied by a published (k, n, AIC) triple.
double bic_from_aic(std::size_t k, std::size_t n, double aic);
double log_likelihood_from_aic(std::size_t k, double aic);

double sigmoid(double z);

/// Bernoulli log-likelihood; `design` includes the intercept column.
double logit_log_likelihood(const Eigen::MatrixXd& design,
                            const Eigen::VectorXd& y,
                            const Eigen::VectorXd& beta);
/// Gradient of logit_log_likelihood with respect to beta.
Eigen::VectorXd logit_score(const Eigen::MatrixXd& design,
                            const Eigen::VectorXd& y,
                            const Eigen::VectorXd& beta);

/// Closed-form intercept-only log-likelihood n[p ln p + (1-p) ln(1-p)].
double null_log_likelihood(const Eigen::VectorXd& y);

/// Damped Newton (IRLS) maximum likelihood. `predictors` excludes the
/// intercept column. Throws ValidationError for rank deficiency (naming
/// the collinear columns) or single-class labels. Separation or the
/// iteration cap yields converged = false with a diagnostic.
LogitModel fit_logit(const Eigen::MatrixXd& predictors,
                     const Eigen::VectorXd& y,
                     std::vector<std::string> names,
                     const LogitOptions& options = {});

/// Fits on the fit-eligible rows. Throws ValidationError with fewer than
/// three labeled rows.
LogitModel fit_logit(std::span<const ClientFeatureRow> rows,
                     std::vector<std::string> predictors,
                     const LogitOptions& options = {});

double predict(const LogitModel& model, std::span<const double> x);
/// Throws ValidationError when a predictor is not a feature column.
double predict(const LogitModel& model, const ClientFeatureRow& row);

struct ScoredClient {
  PartyId party_id;
  double probability = 0.0;
  RiskLabel label = RiskLabel::Unknown;
};

/// Descending probability, ties by party_id; all rows are scored.
std::vector<ScoredClient> rank_clients(const LogitModel& model,
                                       std::span<const ClientFeatureRow> rows,
                                       std::size_t top_k);

/// Coefficients as published for the four reference models, keyed
/// "paper:model1" .. "paper:model4". Rounded to three decimals.
std::vector<LogitModel> bundled_models();
/// Accepts a bundled key or a path to a model JSON file.
LogitModel load_model(std::string_view spec);

std::string model_to_json(const LogitModel& model);
LogitModel model_from_json(std::string_view text);

/// Table-style coefficient report (aligned text) and CSV.
void write_model_report(std::ostream& out,
                        std::span<const LogitModel> models);
void write_model_report_csv(std::ostream& out,
                            std::span<const LogitModel> models);

}  // namespace amlnet
