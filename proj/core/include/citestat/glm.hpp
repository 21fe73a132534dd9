#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "citestat/metrics.hpp"

namespace citestat {

enum class ModelVariant { Model1, Model2 };

/// Regressor layout: [intercept, h, h^2/100, UK, OtherEurope, AustraliaNZ,
/// Other, Male], plus mean authors per cited paper for Model 2. North
/// America and Female are the omitted baselines.
struct ModelSpec {
  ModelVariant variant = ModelVariant::Model1;

  static ModelSpec model1() { return {ModelVariant::Model1}; }
  static ModelSpec model2() { return {ModelVariant::Model2}; }

  std::vector<std::string> regressors() const;
};

std::string_view to_string(ModelVariant variant);

enum class GenderPolicy {
  DropUnknown,  // unknown-gender rows are left out of the design
  Strict,       // unknown gender is an error
};

struct DesignData {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  std::vector<std::string> column_names;
  std::vector<std::string> row_ids;
};

DesignData build_design_matrix(std::span<const AnalysisRecord> records, const ModelSpec& spec,
                               GenderPolicy gender_policy = GenderPolicy::DropUnknown);

/// ln(p / (1 - p)); Error(InvalidArgument) unless 0 < p < 1.
double logit(double p);
double inv_logit(double eta);

/// Quasi-binomial deviance; 0 * log 0 terms vanish, so y may hit 0 or 1.
double binomial_deviance(const Eigen::VectorXd& y, const Eigen::VectorXd& mu);

enum class RobustType { HC0, HC1 };

struct FitOptions {
  double tolerance = 1e-8;  // on |deviance change| / (|deviance| + 1) and the step
  int max_iterations = 100;
  int max_step_halvings = 30;
  double max_condition = 1e12;  // of X'WX
  RobustType robust = RobustType::HC1;
};

struct FitResult {
  std::vector<std::string> column_names;
  Eigen::VectorXd beta;
  Eigen::MatrixXd robust_cov;
  int iterations = 0;
  bool converged = false;
  double deviance = 0.0;
  Eigen::VectorXd fitted;                // mu, strictly inside (0, 1)
  std::vector<double> deviance_history;  // start value, then each accepted step
  RobustType robust = RobustType::HC1;

  std::size_t n_obs() const { return static_cast<std::size_t>(fitted.size()); }
  Eigen::VectorXd robust_se() const;
};

/// Fractional logit by IRLS with step-halving. Rank problems throw
/// Error(RankDeficient) naming the collinear columns; running out of
/// iterations is reported through FitResult::converged, not an exception.
FitResult fit_fractional_logit(const DesignData& data, const FitOptions& options = {});

/// Sandwich B M B with B = (X'WX)^-1, M = sum (y - mu)^2 x x'; HC1 scales
/// by n / (n - k).
Eigen::MatrixXd robust_covariance(const DesignData& data, const Eigen::VectorXd& beta,
                                  RobustType type = RobustType::HC1);

/// Quasi-likelihood covariance phi * (X'WX)^-1 with Pearson dispersion.
Eigen::MatrixXd model_based_covariance(const DesignData& data, const Eigen::VectorXd& beta);

/// Score sum (y - mu) x at beta.
Eigen::VectorXd quasi_score(const DesignData& data, const Eigen::VectorXd& beta);

struct WaldTerm {
  std::optional<double> z;        // empty when SE == 0
  std::optional<double> p_value;  // two-sided, standard normal
  std::string stars;
};

/// "***" for p < 0.01, "**" for p < 0.05, "*" for p < 0.1.
std::string significance_stars(double p_value);
WaldTerm wald_test(double coefficient, double standard_error);
std::vector<WaldTerm> wald_inference(const FitResult& fit);

enum class AmeMethod {
  Derivative,  // beta_j * mean(mu (1 - mu)) for every regressor
  Discrete,    // 0/1 columns: mean of mu(x_j = 1) - mu(x_j = 0)
};

/// Average marginal effects, one per column; empty for the intercept.
std::vector<std::optional<double>> average_marginal_effects(const FitResult& fit, const DesignData& data,
                                                            AmeMethod method = AmeMethod::Derivative);

/// d mu / d h with the quadratic term folded in, at a given h and weight
/// mu(1 - mu).
double combined_h_effect(double beta_h, double beta_h2_over_100, double h, double weight);

/// Everything reported per model.
struct ModelSummary {
  ModelVariant variant = ModelVariant::Model1;
  FitResult fit;
  std::vector<WaldTerm> wald;
  std::vector<std::optional<double>> ame;
};

ModelSummary summarize_model(ModelVariant variant, FitResult fit, const DesignData& data,
                             AmeMethod method = AmeMethod::Derivative);

/// "term,coef,robust_se,z,p,stars,ame"
std::string fit_to_csv(const ModelSummary& summary);
std::string fit_to_json(const ModelSummary& summary);

}  // namespace citestat
