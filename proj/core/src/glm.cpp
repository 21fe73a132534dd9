#include "citestat/glm.hpp"

#include <algorithm>
#include <cmath>

#include "citestat/errors.hpp"

namespace citestat {
namespace {

constexpr double kStartClamp = 1e-6;
// Fitted means are kept this far from the boundary so weights stay positive.
constexpr double kMuFloor = 1e-12;

Eigen::VectorXd mean_from_eta(const Eigen::VectorXd& eta) {
  Eigen::VectorXd mu(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) mu[i] = std::clamp(inv_logit(eta[i]), kMuFloor, 1.0 - kMuFloor);
  return mu;
}

Eigen::MatrixXd weighted_gram(const Eigen::MatrixXd& X, const Eigen::VectorXd& w) {
  return X.transpose() * w.asDiagonal() * X;
}

void validate_design(const DesignData& data) {
  const auto n = data.X.rows();
  const auto k = data.X.cols();
  if (data.y.size() != n) throw Error(ErrorCode::InvalidArgument, "design: y length differs from X rows");
  if (static_cast<Eigen::Index>(data.column_names.size()) != k) {
    throw Error(ErrorCode::InvalidArgument, "design: column name count differs from X columns");
  }
  if (n <= k) {
    throw Error(ErrorCode::InsufficientData, "design has " + std::to_string(n) + " observations for " +
                                                 std::to_string(k) + " coefficients; need n > k");
  }
  if (!data.X.allFinite() || !data.y.allFinite()) throw Error(ErrorCode::InvalidArgument, "design has non-finite entries");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (data.y[i] < 0.0 || data.y[i] > 1.0) {
      throw Error(ErrorCode::InvalidArgument, "response outside [0, 1] at row " + std::to_string(i));
    }
  }
}

// Throws RankDeficient if X'WX is too ill-conditioned, naming the columns
// that are (numerically) combinations of earlier ones.
void check_conditioning(const Eigen::MatrixXd& gram, const std::vector<std::string>& names, double max_condition) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double lmax = eig.eigenvalues().maxCoeff();
  const double lmin = eig.eigenvalues().minCoeff();
  if (lmax > 0.0 && lmin > 0.0 && lmax / lmin < max_condition) return;

  const Eigen::Index k = gram.rows();
  std::vector<Eigen::Index> kept;
  std::vector<std::string> offending;
  Eigen::Index worst = 0;
  double worst_ratio = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < k; ++j) {
    const double diag = gram(j, j);
    double residual = diag;
    if (!kept.empty() && diag > 0.0) {
      const auto m = static_cast<Eigen::Index>(kept.size());
      Eigen::MatrixXd sub(m, m);
      Eigen::VectorXd cross(m);
      for (Eigen::Index a = 0; a < m; ++a) {
        cross[a] = gram(kept[a], j);
        for (Eigen::Index b = 0; b < m; ++b) sub(a, b) = gram(kept[a], kept[b]);
      }
      residual = diag - cross.dot(sub.ldlt().solve(cross));
    }
    const double ratio = diag > 0.0 ? residual / diag : 0.0;
    if (ratio < worst_ratio) {
      worst_ratio = ratio;
      worst = j;
    }
    if (ratio <= 1.0 / max_condition) {
      offending.push_back(names[static_cast<std::size_t>(j)]);
    } else {
      kept.push_back(j);
    }
  }
  if (offending.empty()) offending.push_back(names[static_cast<std::size_t>(worst)]);
  std::string list;
  for (const auto& o : offending) list += (list.empty() ? "" : ", ") + o;
  throw Error(ErrorCode::RankDeficient, "rank-deficient design (X'WX condition > " +
                                            std::to_string(static_cast<long long>(max_condition)) +
                                            "); collinear columns: " + list);
}

Eigen::MatrixXd bread(const DesignData& data, const Eigen::VectorXd& mu, double max_condition = 1e12) {
  const Eigen::VectorXd w = mu.array() * (1.0 - mu.array());
  const Eigen::MatrixXd gram = weighted_gram(data.X, w);
  check_conditioning(gram, data.column_names, max_condition);
  return gram.ldlt().solve(Eigen::MatrixXd::Identity(gram.rows(), gram.cols()));
}

}  // namespace

std::vector<std::string> ModelSpec::regressors() const {
  std::vector<std::string> names{"intercept", "h",     "h2_100", "uk", "other_europe", "australia_nz",
                                 "other",     "male"};
  if (variant == ModelVariant::Model2) names.push_back("mean_authors");
  return names;
}

std::string_view to_string(ModelVariant variant) {
  return variant == ModelVariant::Model1 ? "model1" : "model2";
}

DesignData build_design_matrix(std::span<const AnalysisRecord> records, const ModelSpec& spec,
                               GenderPolicy gender_policy) {
  if (records.empty()) throw Error(ErrorCode::InsufficientData, "no records to build a design matrix from");
  DesignData d;
  d.column_names = spec.regressors();
  std::vector<const AnalysisRecord*> rows;
  for (const auto& r : records) {
    if (r.gender == Gender::Unknown) {
      if (gender_policy == GenderPolicy::Strict) {
        throw Error(ErrorCode::InvalidArgument, "researcher '" + r.researcher_id + "' has unknown gender");
      }
      continue;
    }
    rows.push_back(&r);
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto k = static_cast<Eigen::Index>(d.column_names.size());
  d.X.resize(n, k);
  d.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = *rows[static_cast<std::size_t>(i)];
    const double h = r.h_index;
    d.X(i, 0) = 1.0;
    d.X(i, 1) = h;
    d.X(i, 2) = h * h / 100.0;
    d.X(i, 3) = r.region == Region::UK ? 1.0 : 0.0;
    d.X(i, 4) = r.region == Region::OtherEurope ? 1.0 : 0.0;
    d.X(i, 5) = r.region == Region::AustraliaNZ ? 1.0 : 0.0;
    d.X(i, 6) = r.region == Region::Other ? 1.0 : 0.0;
    d.X(i, 7) = r.gender == Gender::Male ? 1.0 : 0.0;
    if (spec.variant == ModelVariant::Model2) d.X(i, 8) = r.mean_authors;
    d.y[i] = r.self_prop;
    d.row_ids.push_back(r.researcher_id);
  }
  return d;
}

double logit(double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::InvalidArgument, "logit needs 0 < p < 1");
  return std::log(p / (1.0 - p));
}

double inv_logit(double eta) {
  // Split by sign so exp never overflows.
  if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

double binomial_deviance(const Eigen::VectorXd& y, const Eigen::VectorXd& mu) {
  double dev = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double yi = y[i];
    const double mi = mu[i];
    if (yi > 0.0) dev += yi * std::log(yi / mi);
    if (yi < 1.0) dev += (1.0 - yi) * std::log((1.0 - yi) / (1.0 - mi));
  }
  return 2.0 * dev;
}

Eigen::VectorXd FitResult::robust_se() const { return robust_cov.diagonal().cwiseMax(0.0).cwiseSqrt(); }

FitResult fit_fractional_logit(const DesignData& data, const FitOptions& options) {
  validate_design(data);
  const auto k = data.X.cols();
  const auto& X = data.X;
  const auto& y = data.y;

  FitResult fit;
  fit.column_names = data.column_names;
  fit.robust = options.robust;
  fit.beta = Eigen::VectorXd::Zero(k);
  const double ybar = std::clamp(y.mean(), kStartClamp, 1.0 - kStartClamp);
  const bool has_intercept = (X.col(0).array() == 1.0).all();
  if (has_intercept) fit.beta[0] = logit(ybar);

  Eigen::VectorXd eta = X * fit.beta;
  Eigen::VectorXd mu = mean_from_eta(eta);
  double dev = binomial_deviance(y, mu);
  fit.deviance_history.push_back(dev);

  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    fit.iterations = iter;
    const Eigen::VectorXd w = mu.array() * (1.0 - mu.array());
    const Eigen::VectorXd z = eta.array() + (y - mu).array() / w.array();
    const Eigen::MatrixXd gram = weighted_gram(X, w);
    check_conditioning(gram, data.column_names, options.max_condition);
    const Eigen::VectorXd target = X.transpose() * (w.array() * z.array()).matrix();
    Eigen::VectorXd beta_new = gram.ldlt().solve(target);

    Eigen::VectorXd eta_new = X * beta_new;
    Eigen::VectorXd mu_new = mean_from_eta(eta_new);
    double dev_new = binomial_deviance(y, mu_new);
    // Near the optimum the deviance cannot resolve the last Newton steps,
    // so an increase at rounding level still counts as descent.
    const double slack = 1e-12 * (std::abs(dev) + 1.0);
    for (int halving = 0; halving < options.max_step_halvings && !(dev_new <= dev + slack); ++halving) {
      beta_new = 0.5 * (fit.beta + beta_new);
      eta_new = X * beta_new;
      mu_new = mean_from_eta(eta_new);
      dev_new = binomial_deviance(y, mu_new);
    }
    // The deviance test alone stops early on large samples where the score
    // is still well away from zero, so the step must have settled too.
    const double change = std::abs(dev - dev_new);
    const double step = (beta_new - fit.beta).cwiseAbs().maxCoeff();
    const bool small = change < options.tolerance * (std::abs(dev_new) + 1.0) &&
                       step < options.tolerance * (1.0 + beta_new.cwiseAbs().maxCoeff());
    if (!(dev_new <= dev + slack)) {
      // No descent left even after halving: we are at the optimum to
      // floating-point precision, or stuck.
      fit.converged = small;
      break;
    }
    fit.beta = std::move(beta_new);
    eta = std::move(eta_new);
    mu = std::move(mu_new);
    dev = dev_new;
    fit.deviance_history.push_back(dev);
    if (small) {
      fit.converged = true;
      break;
    }
  }

  fit.deviance = dev;
  fit.fitted = mu;
  fit.robust_cov = robust_covariance(data, fit.beta, options.robust);
  return fit;
}

Eigen::MatrixXd robust_covariance(const DesignData& data, const Eigen::VectorXd& beta, RobustType type) {
  validate_design(data);
  const Eigen::VectorXd mu = mean_from_eta(data.X * beta);
  const Eigen::MatrixXd B = bread(data, mu);
  const Eigen::VectorXd r2 = (data.y - mu).array().square();
  const Eigen::MatrixXd M = weighted_gram(data.X, r2);
  Eigen::MatrixXd V = B * M * B;
  if (type == RobustType::HC1) {
    const double n = static_cast<double>(data.X.rows());
    const double k = static_cast<double>(data.X.cols());
    V *= n / (n - k);
  }
  return 0.5 * (V + V.transpose());
}

Eigen::MatrixXd model_based_covariance(const DesignData& data, const Eigen::VectorXd& beta) {
  validate_design(data);
  const Eigen::VectorXd mu = mean_from_eta(data.X * beta);
  const Eigen::MatrixXd B = bread(data, mu);
  const double n = static_cast<double>(data.X.rows());
  const double k = static_cast<double>(data.X.cols());
  const double pearson = ((data.y - mu).array().square() / (mu.array() * (1.0 - mu.array()))).sum();
  const Eigen::MatrixXd V = (pearson / (n - k)) * B;
  return 0.5 * (V + V.transpose());
}

Eigen::VectorXd quasi_score(const DesignData& data, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd mu = mean_from_eta(data.X * beta);
  return data.X.transpose() * (data.y - mu);
}

std::string significance_stars(double p) {
  if (p < 0.01) return "***";
  if (p < 0.05) return "**";
  if (p < 0.1) return "*";
  return "";
}

WaldTerm wald_test(double coefficient, double standard_error) {
  WaldTerm t;
  if (!(standard_error > 0.0) || !std::isfinite(standard_error)) return t;
  t.z = coefficient / standard_error;
  t.p_value = std::erfc(std::abs(*t.z) / std::sqrt(2.0));
  t.stars = significance_stars(*t.p_value);
  return t;
}

std::vector<WaldTerm> wald_inference(const FitResult& fit) {
  const Eigen::VectorXd se = fit.robust_se();
  std::vector<WaldTerm> out;
  for (Eigen::Index j = 0; j < fit.beta.size(); ++j) out.push_back(wald_test(fit.beta[j], se[j]));
  return out;
}

std::vector<std::optional<double>> average_marginal_effects(const FitResult& fit, const DesignData& data,
                                                            AmeMethod method) {
  const Eigen::VectorXd& mu = fit.fitted;
  const double mean_weight = (mu.array() * (1.0 - mu.array())).mean();
  const Eigen::VectorXd eta = data.X * fit.beta;
  std::vector<std::optional<double>> out;
  for (Eigen::Index j = 0; j < fit.beta.size(); ++j) {
    const bool intercept = (data.X.col(j).array() == 1.0).all() && j == 0;
    if (intercept) {
      out.emplace_back(std::nullopt);
      continue;
    }
    const bool binary = (data.X.col(j).array() == 0.0 || data.X.col(j).array() == 1.0).all();
    if (method == AmeMethod::Discrete && binary) {
      double acc = 0.0;
      const double b = fit.beta[j];
      for (Eigen::Index i = 0; i < eta.size(); ++i) {
        const double base = eta[i] - b * data.X(i, j);
        acc += inv_logit(base + b) - inv_logit(base);
      }
      out.emplace_back(acc / static_cast<double>(eta.size()));
    } else {
      out.emplace_back(fit.beta[j] * mean_weight);
    }
  }
  return out;
}

double combined_h_effect(double beta_h, double beta_h2_over_100, double h, double weight) {
  return (beta_h + 2.0 * beta_h2_over_100 * h / 100.0) * weight;
}

ModelSummary summarize_model(ModelVariant variant, FitResult fit, const DesignData& data, AmeMethod method) {
  ModelSummary s;
  s.variant = variant;
  s.wald = wald_inference(fit);
  s.ame = average_marginal_effects(fit, data, method);
  s.fit = std::move(fit);
  return s;
}

}  // namespace citestat
