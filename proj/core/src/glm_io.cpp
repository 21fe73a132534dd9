#include <fmt/format.h>
#include <json.hpp>

#include "citestat/glm.hpp"

namespace citestat {
namespace {

std::string optional_number(const std::optional<double>& v) { return v ? fmt::format("{}", *v) : std::string(); }

nlohmann::ordered_json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

std::string fit_to_csv(const ModelSummary& s) {
  const Eigen::VectorXd se = s.fit.robust_se();
  std::string out = "term,coef,robust_se,z,p,stars,ame\n";
  for (Eigen::Index j = 0; j < s.fit.beta.size(); ++j) {
    const auto idx = static_cast<std::size_t>(j);
    out += fmt::format("{},{},{},{},{},{},{}\n", s.fit.column_names[idx], s.fit.beta[j], se[j],
                       optional_number(s.wald[idx].z), optional_number(s.wald[idx].p_value), s.wald[idx].stars,
                       optional_number(s.ame[idx]));
  }
  return out;
}

std::string fit_to_json(const ModelSummary& s) {
  using nlohmann::ordered_json;
  const auto& fit = s.fit;
  const auto k = fit.beta.size();
  ordered_json j;
  j["model"] = std::string(to_string(s.variant));
  j["n_obs"] = fit.n_obs();
  j["column_names"] = fit.column_names;
  j["beta"] = std::vector<double>(fit.beta.data(), fit.beta.data() + k);
  ordered_json cov = ordered_json::array();
  for (Eigen::Index r = 0; r < k; ++r) {
    std::vector<double> row(static_cast<std::size_t>(k));
    for (Eigen::Index c = 0; c < k; ++c) row[static_cast<std::size_t>(c)] = fit.robust_cov(r, c);
    cov.push_back(row);
  }
  j["robust_cov"] = std::move(cov);
  j["robust_type"] = fit.robust == RobustType::HC1 ? "hc1" : "hc0";
  const Eigen::VectorXd se = fit.robust_se();
  j["robust_se"] = std::vector<double>(se.data(), se.data() + k);
  j["iterations"] = fit.iterations;
  j["converged"] = fit.converged;
  j["deviance"] = fit.deviance;
  j["deviance_history"] = fit.deviance_history;
  ordered_json terms = ordered_json::array();
  for (Eigen::Index c = 0; c < k; ++c) {
    const auto idx = static_cast<std::size_t>(c);
    terms.push_back({{"term", fit.column_names[idx]},
                     {"z", optional_json(s.wald[idx].z)},
                     {"p", optional_json(s.wald[idx].p_value)},
                     {"stars", s.wald[idx].stars},
                     {"ame", optional_json(s.ame[idx])}});
  }
  j["inference"] = std::move(terms);
  j["fitted"] = std::vector<double>(fit.fitted.data(), fit.fitted.data() + fit.fitted.size());
  return j.dump(2) + "\n";
}

}  // namespace citestat
