#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "citestat/errors.hpp"
#include "citestat/generator.hpp"
#include "citestat/glm.hpp"
#include "citestat/report.hpp"

using citestat::DesignData;
using citestat::FitResult;

namespace {

DesignData design(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  DesignData d;
  d.X = X;
  d.y = y;
  for (Eigen::Index j = 0; j < X.cols(); ++j) d.column_names.push_back(j == 0 ? "intercept" : "x" + std::to_string(j));
  for (Eigen::Index i = 0; i < X.rows(); ++i) d.row_ids.push_back("r" + std::to_string(i));
  return d;
}

// Fractional outcomes drawn as binomial(m, mu) / m, so the variance is
// proportional to mu (1 - mu) exactly as the quasi-binomial model assumes.
DesignData simulated(std::size_t n, std::uint64_t seed, const Eigen::Vector3d& beta) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  std::bernoulli_distribution coin(0.4);
  Eigen::MatrixXd X(n, 3);
  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    X(r, 0) = 1.0;
    X(r, 1) = normal(gen);
    X(r, 2) = coin(gen) ? 1.0 : 0.0;
    const double mu = citestat::inv_logit(X.row(r).dot(beta));
    std::binomial_distribution<int> draw(20, mu);
    y[r] = draw(gen) / 20.0;
  }
  return design(X, y);
}

std::vector<citestat::AnalysisRecord> generated_records(std::size_t n, std::uint64_t seed) {
  return citestat::build_analysis_records(
      citestat::generate_synthetic_corpus(citestat::reference_generator_spec(n, seed)));
}

}  // namespace

TEST(Link, Values) {
  EXPECT_DOUBLE_EQ(citestat::logit(0.5), 0.0);
  EXPECT_DOUBLE_EQ(citestat::inv_logit(0.0), 0.5);
  EXPECT_NEAR(citestat::logit(0.1), -2.197225, 1e-6);
  EXPECT_NEAR(citestat::inv_logit(-1.910), 0.1289, 1e-4);
  EXPECT_THROW(citestat::logit(0.0), citestat::Error);
  EXPECT_THROW(citestat::logit(1.0), citestat::Error);
}

TEST(Link, MutualInverse) {
  for (double p = 1e-9; p < 1.0; p = p * 1.7 + 1e-4) {
    if (p > 1.0 - 1e-9) break;
    EXPECT_NEAR(citestat::inv_logit(citestat::logit(p)), p, 1e-12);
  }
  for (double e = -20; e <= 20; e += 0.37) {
    EXPECT_NEAR(citestat::logit(citestat::inv_logit(e)), e, 1e-6 * std::max(1.0, std::exp(std::abs(e)) * 1e-3));
  }
}

TEST(Design, Columns) {
  citestat::AnalysisRecord a;
  a.researcher_id = "A";
  a.h_index = 10;
  a.self_prop = 0.2;
  a.region = citestat::Region::NorthAmerica;
  a.gender = citestat::Gender::Female;
  a.mean_authors = 3.5;
  citestat::AnalysisRecord b = a;
  b.researcher_id = "B";
  b.region = citestat::Region::AustraliaNZ;
  b.gender = citestat::Gender::Male;
  citestat::AnalysisRecord c = a;
  c.researcher_id = "C";
  c.gender = citestat::Gender::Unknown;
  const std::vector<citestat::AnalysisRecord> records{a, b, c};

  const auto d1 = citestat::build_design_matrix(records, citestat::ModelSpec::model1());
  EXPECT_EQ(d1.column_names, (std::vector<std::string>{"intercept", "h", "h2_100", "uk", "other_europe",
                                                        "australia_nz", "other", "male"}));
  ASSERT_EQ(d1.X.rows(), 2);
  EXPECT_EQ(d1.X(0, 2), 1.0);
  for (int j = 3; j < 8; ++j) EXPECT_EQ(d1.X(0, j), 0.0);
  EXPECT_EQ(d1.X(1, 5), 1.0);
  EXPECT_EQ(d1.X(1, 7), 1.0);
  EXPECT_EQ(d1.y[0], 0.2);
  EXPECT_EQ(d1.row_ids, (std::vector<std::string>{"A", "B"}));

  const auto d2 = citestat::build_design_matrix(records, citestat::ModelSpec::model2());
  EXPECT_EQ(d2.X.cols(), 9);
  EXPECT_EQ(d2.column_names.back(), "mean_authors");
  EXPECT_EQ(d2.X(0, 8), 3.5);

  EXPECT_THROW(citestat::build_design_matrix(records, citestat::ModelSpec::model1(), citestat::GenderPolicy::Strict),
               citestat::Error);
}

TEST(Fit, InterceptOnlyIsLogitOfMean) {
  const Eigen::MatrixXd X = Eigen::MatrixXd::Ones(10, 1);
  const auto fit = citestat::fit_fractional_logit(design(X, Eigen::VectorXd::Constant(10, 0.2)));
  EXPECT_TRUE(fit.converged);
  EXPECT_NEAR(fit.beta[0], -1.386294361, 1e-8);
  // Zero residuals leave nothing in the meat.
  EXPECT_NEAR(fit.robust_cov.norm(), 0.0, 1e-20);

  Eigen::VectorXd y(5);
  y << 0.0, 0.1, 0.3, 1.0, 0.35;
  const auto mixed = citestat::fit_fractional_logit(design(Eigen::MatrixXd::Ones(5, 1), y));
  EXPECT_NEAR(mixed.beta[0], citestat::logit(y.mean()), 1e-8);
}

TEST(Fit, SaturatedTwoGroups) {
  Eigen::MatrixXd X(6, 2);
  Eigen::VectorXd y(6);
  X << 1, 0, 1, 0, 1, 0, 1, 1, 1, 1, 1, 1;
  y << 0.05, 0.1, 0.15, 0.2, 0.3, 0.4;
  const auto fit = citestat::fit_fractional_logit(design(X, y));
  EXPECT_TRUE(fit.converged);
  EXPECT_NEAR(fit.beta[0], citestat::logit(0.1), 1e-6);
  EXPECT_NEAR(fit.beta[1], 1.349927, 1e-6);
}

TEST(Fit, SandwichMatchesDenseOracle) {
  Eigen::MatrixXd X(3, 2);
  Eigen::VectorXd y(3);
  X << 1, 0, 1, 1, 1, 2;
  y << 0.2, 0.5, 0.6;
  const auto d = design(X, y);
  const auto fit = citestat::fit_fractional_logit(d);
  ASSERT_TRUE(fit.converged);

  // Plain-loop evaluation of B M B with the n / (n - k) factor.
  double b00 = 0, b01 = 0, b11 = 0, m00 = 0, m01 = 0, m11 = 0;
  for (int i = 0; i < 3; ++i) {
    const double x0 = X(i, 0), x1 = X(i, 1);
    const double mu = 1.0 / (1.0 + std::exp(-(fit.beta[0] * x0 + fit.beta[1] * x1)));
    const double w = mu * (1 - mu);
    const double r2 = (y[i] - mu) * (y[i] - mu);
    b00 += w * x0 * x0, b01 += w * x0 * x1, b11 += w * x1 * x1;
    m00 += r2 * x0 * x0, m01 += r2 * x0 * x1, m11 += r2 * x1 * x1;
  }
  const double det = b00 * b11 - b01 * b01;
  const double i00 = b11 / det, i01 = -b01 / det, i11 = b00 / det;
  const double scale = 3.0 / (3.0 - 2.0);
  const double bm00 = i00 * m00 + i01 * m01, bm01 = i00 * m01 + i01 * m11;
  const double bm10 = i01 * m00 + i11 * m01, bm11 = i01 * m01 + i11 * m11;
  const double v00 = scale * (bm00 * i00 + bm01 * i01);
  const double v01 = scale * (bm00 * i01 + bm01 * i11);
  const double v11 = scale * (bm10 * i01 + bm11 * i11);

  const Eigen::MatrixXd V = citestat::robust_covariance(d, fit.beta);
  EXPECT_NEAR(V(0, 0), v00, 1e-10 * std::abs(v00));
  EXPECT_NEAR(V(0, 1), v01, 1e-10 * std::abs(v01));
  EXPECT_NEAR(V(1, 0), v01, 1e-10 * std::abs(v01));
  EXPECT_NEAR(V(1, 1), v11, 1e-10 * std::abs(v11));

  const Eigen::MatrixXd V0 = citestat::robust_covariance(d, fit.beta, citestat::RobustType::HC0);
  EXPECT_NEAR(V0(1, 1), v11 / scale, 1e-10 * std::abs(v11));
}

TEST(Fit, RobustAgreesWithModelBasedWhenVarianceIsCorrect) {
  const auto d = simulated(10000, 77, Eigen::Vector3d(-1.0, 0.5, 0.3));
  const auto fit = citestat::fit_fractional_logit(d);
  ASSERT_TRUE(fit.converged);
  const Eigen::VectorXd robust = fit.robust_se();
  const Eigen::VectorXd model = citestat::model_based_covariance(d, fit.beta).diagonal().cwiseSqrt();
  for (Eigen::Index j = 0; j < 3; ++j) {
    EXPECT_NEAR(robust[j] / model[j], 1.0, 0.10) << d.column_names[static_cast<std::size_t>(j)];
  }
}

TEST(Fit, ConvergenceProperties) {
  const auto records = generated_records(300, 21);
  for (const auto& spec : {citestat::ModelSpec::model1(), citestat::ModelSpec::model2()}) {
    const auto d = citestat::build_design_matrix(records, spec);
    const auto fit = citestat::fit_fractional_logit(d);
    ASSERT_TRUE(fit.converged);
    EXPECT_LE(fit.iterations, 100);
    EXPECT_LT(citestat::quasi_score(d, fit.beta).lpNorm<Eigen::Infinity>(), 1e-6);
    for (std::size_t i = 1; i < fit.deviance_history.size(); ++i) {
      EXPECT_LE(fit.deviance_history[i], fit.deviance_history[i - 1] + 1e-12 * (fit.deviance_history[i - 1] + 1.0));
    }
    EXPECT_DOUBLE_EQ(fit.deviance_history.back(), fit.deviance);
    EXPECT_LT((fit.robust_cov - fit.robust_cov.transpose()).cwiseAbs().maxCoeff(), 1e-10);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(fit.robust_cov);
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-12 * eig.eigenvalues().maxCoeff());
    EXPECT_TRUE((fit.robust_se().array() > 0).all());
    EXPECT_TRUE((fit.fitted.array() > 0).all() && (fit.fitted.array() < 1).all());
  }
}

TEST(Fit, RowPermutationInvariance) {
  const auto d = citestat::build_design_matrix(generated_records(200, 8), citestat::ModelSpec::model1());
  const auto fit = citestat::fit_fractional_logit(d);
  auto shuffled = d;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(d.X.rows()));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), std::mt19937(3));
  for (std::size_t i = 0; i < order.size(); ++i) {
    shuffled.X.row(static_cast<Eigen::Index>(i)) = d.X.row(order[i]);
    shuffled.y[static_cast<Eigen::Index>(i)] = d.y[order[i]];
  }
  const auto refit = citestat::fit_fractional_logit(shuffled);
  EXPECT_LT((fit.beta - refit.beta).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((fit.robust_cov - refit.robust_cov).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Fit, ColumnScalingConsistency) {
  const auto d = citestat::build_design_matrix(generated_records(250, 13), citestat::ModelSpec::model1());
  const auto fit = citestat::fit_fractional_logit(d);
  for (double c : {100.0, 0.1}) {
    auto scaled = d;
    scaled.X.col(2) *= c;
    const auto refit = citestat::fit_fractional_logit(scaled);
    EXPECT_NEAR(refit.beta[2], fit.beta[2] / c, 1e-8 * std::max(1.0, std::abs(fit.beta[2] / c)));
    EXPECT_LT((refit.fitted - fit.fitted).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Fit, RankDeficiencyNamesColumns) {
  Eigen::MatrixXd X(8, 3);
  Eigen::VectorXd y(8);
  for (int i = 0; i < 8; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = i;
    X(i, 2) = 2.0 * i + 1.0;
    y[i] = 0.1 + 0.05 * i;
  }
  try {
    citestat::fit_fractional_logit(design(X, y));
    FAIL();
  } catch (const citestat::Error& e) {
    EXPECT_EQ(e.code(), citestat::ErrorCode::RankDeficient);
    EXPECT_NE(std::string(e.what()).find("x2"), std::string::npos) << e.what();
  }
}

TEST(Fit, BadDesigns) {
  auto code = [](const DesignData& d) {
    try {
      citestat::fit_fractional_logit(d);
    } catch (const citestat::Error& e) {
      return e.code();
    }
    ADD_FAILURE() << "design accepted";
    return citestat::ErrorCode::Io;
  };
  EXPECT_EQ(code(design(Eigen::MatrixXd::Ones(2, 2), Eigen::VectorXd::Constant(2, 0.5))),
            citestat::ErrorCode::InsufficientData);
  EXPECT_EQ(code(design(Eigen::MatrixXd::Ones(4, 1), Eigen::VectorXd::Constant(4, 1.5))),
            citestat::ErrorCode::InvalidArgument);
  auto nan = design(Eigen::MatrixXd::Ones(4, 1), Eigen::VectorXd::Constant(4, 0.5));
  nan.X(2, 0) = std::nan("");
  EXPECT_EQ(code(nan), citestat::ErrorCode::InvalidArgument);
}

TEST(Fit, NonConvergenceIsReported) {
  const auto d = citestat::build_design_matrix(generated_records(100, 2), citestat::ModelSpec::model1());
  citestat::FitOptions options;
  options.max_iterations = 1;
  const auto fit = citestat::fit_fractional_logit(d, options);
  EXPECT_FALSE(fit.converged);
  EXPECT_EQ(fit.iterations, 1);
}

TEST(Wald, Examples) {
  const auto uk = citestat::wald_test(0.240, 0.106);
  EXPECT_NEAR(*uk.z, 2.264, 1e-3);
  EXPECT_NEAR(*uk.p_value, 0.0236, 1e-4);
  EXPECT_EQ(uk.stars, "**");

  const auto male = citestat::wald_test(0.031, 0.080);
  EXPECT_NEAR(*male.p_value, 0.702, 0.01);
  EXPECT_EQ(male.stars, "");

  const auto zero = citestat::wald_test(0.0, 0.3);
  EXPECT_DOUBLE_EQ(*zero.z, 0.0);
  EXPECT_DOUBLE_EQ(*zero.p_value, 1.0);
  EXPECT_EQ(zero.stars, "");

  const auto undefined = citestat::wald_test(0.5, 0.0);
  EXPECT_FALSE(undefined.z.has_value());
  EXPECT_FALSE(undefined.p_value.has_value());
}

TEST(Wald, StarThresholdsAreStrict) {
  EXPECT_EQ(citestat::significance_stars(0.009), "***");
  EXPECT_EQ(citestat::significance_stars(0.01), "**");
  EXPECT_EQ(citestat::significance_stars(0.049), "**");
  EXPECT_EQ(citestat::significance_stars(0.05), "*");
  EXPECT_EQ(citestat::significance_stars(0.0999), "*");
  EXPECT_EQ(citestat::significance_stars(0.1), "");
}

TEST(MarginalEffects, ConstantWeight) {
  Eigen::MatrixXd X(4, 2);
  X << 1, -1, 1, 1, 1, -1, 1, 1;
  FitResult fit;
  fit.column_names = {"intercept", "x1"};
  fit.beta = Eigen::Vector2d(0.0, 0.8);
  fit.fitted = Eigen::VectorXd::Constant(4, 0.5);
  const auto ame = citestat::average_marginal_effects(fit, design(X, Eigen::VectorXd::Constant(4, 0.5)));
  ASSERT_EQ(ame.size(), 2u);
  EXPECT_FALSE(ame[0].has_value());
  EXPECT_DOUBLE_EQ(*ame[1], 0.2);
}

TEST(MarginalEffects, PaperScaleRounding) {
  const double weight = 0.126 * (1.0 - 0.126);
  EXPECT_NEAR(weight, 0.110, 5e-4);
  EXPECT_EQ(citestat::format_fixed(-0.023 * weight, 3), "-0.003");
  EXPECT_DOUBLE_EQ(citestat::combined_h_effect(-0.023, 0.019, 0.0, weight), -0.023 * weight);
  EXPECT_DOUBLE_EQ(citestat::combined_h_effect(-0.023, 0.019, 50.0, 1.0), -0.023 + 2 * 0.019 * 0.5);
}

TEST(MarginalEffects, SignsFollowCoefficients) {
  const auto records = generated_records(300, 31);
  const auto d = citestat::build_design_matrix(records, citestat::ModelSpec::model2());
  const auto fit = citestat::fit_fractional_logit(d);
  for (auto method : {citestat::AmeMethod::Derivative, citestat::AmeMethod::Discrete}) {
    const auto ame = citestat::average_marginal_effects(fit, d, method);
    for (std::size_t j = 1; j < ame.size(); ++j) {
      ASSERT_TRUE(ame[j].has_value());
      EXPECT_EQ(std::signbit(*ame[j]), std::signbit(fit.beta[static_cast<Eigen::Index>(j)])) << d.column_names[j];
    }
  }
  const auto derivative = citestat::average_marginal_effects(fit, d);
  const double w = (fit.fitted.array() * (1.0 - fit.fitted.array())).mean();
  EXPECT_NEAR(*derivative[1], fit.beta[1] * w, 1e-15);
}

TEST(Summary, CsvAndJson) {
  const auto records = generated_records(150, 6);
  const auto d = citestat::build_design_matrix(records, citestat::ModelSpec::model1());
  const auto summary = citestat::summarize_model(citestat::ModelVariant::Model1, citestat::fit_fractional_logit(d), d);
  const auto csv = citestat::fit_to_csv(summary);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "term,coef,robust_se,z,p,stars,ame");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 9);
  const auto json = citestat::fit_to_json(summary);
  EXPECT_NE(json.find("\"robust_cov\""), std::string::npos);
  EXPECT_NE(json.find("\"converged\": true"), std::string::npos);
}
