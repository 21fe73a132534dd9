#include <cctype>
#include <fstream>
#include <sstream>

#include "citestat/errors.hpp"
#include "citestat/groups.hpp"

namespace citestat {
namespace detail {
extern const std::string_view kBuiltinRegionMapCsv;
}

namespace {

std::string country_key(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (unsigned char c : s) {
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

}  // namespace

std::string_view to_string(Region r) {
  switch (r) {
    case Region::NorthAmerica: return "NorthAmerica";
    case Region::UK: return "UK";
    case Region::OtherEurope: return "OtherEurope";
    case Region::AustraliaNZ: return "AustraliaNZ";
    case Region::Other: return "Other";
  }
  return "Other";
}

std::string_view to_string(Gender g) {
  switch (g) {
    case Gender::Male: return "male";
    case Gender::Female: return "female";
    case Gender::Unknown: return "unknown";
  }
  return "unknown";
}

std::string_view to_string(Cohort c) {
  switch (c) {
    case Cohort::Pre1980: return "Pre1980";
    case Cohort::Y1980_1989: return "Y1980_1989";
    case Cohort::Y1990_1994: return "Y1990_1994";
    case Cohort::Y1995_1999: return "Y1995_1999";
    case Cohort::Y2000_2004: return "Y2000_2004";
    case Cohort::Y2005plus: return "Y2005plus";
  }
  return "Y2005plus";
}

std::optional<Region> parse_region(std::string_view s) {
  for (Region r : kAllRegions) {
    if (to_string(r) == s) return r;
  }
  return std::nullopt;
}

std::optional<Gender> parse_gender(std::string_view s) {
  for (Gender g : kAllGenders) {
    if (to_string(g) == s) return g;
  }
  return std::nullopt;
}

std::string_view display_label(Region r) {
  switch (r) {
    case Region::NorthAmerica: return "North America";
    case Region::UK: return "UK";
    case Region::OtherEurope: return "Other Europe";
    case Region::AustraliaNZ: return "Australia / NZ";
    case Region::Other: return "Other";
  }
  return "Other";
}

std::string_view display_label(Gender g) {
  switch (g) {
    case Gender::Male: return "Male";
    case Gender::Female: return "Female";
    case Gender::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::string_view display_label(Cohort c) {
  switch (c) {
    case Cohort::Pre1980: return "-1980";
    case Cohort::Y1980_1989: return "1980-1989";
    case Cohort::Y1990_1994: return "1990-1994";
    case Cohort::Y1995_1999: return "1995-1999";
    case Cohort::Y2000_2004: return "2000-2004";
    case Cohort::Y2005plus: return "2005-";
  }
  return "2005-";
}

const RegionMap& RegionMap::builtin() {
  static const RegionMap map = from_csv(detail::kBuiltinRegionMapCsv);
  return map;
}

RegionMap RegionMap::from_csv(std::string_view csv_text) {
  RegionMap map;
  std::istringstream in{std::string(csv_text)};
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (country_key(line).empty()) continue;
    if (!header_seen) {
      if (country_key(line) != "country,region") {
        throw Error(ErrorCode::Schema, "region map: expected header 'country,region'");
      }
      header_seen = true;
      continue;
    }
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::Schema, "region map line " + std::to_string(line_no) + ": missing ','");
    }
    std::string region_text = country_key(line.substr(comma + 1));
    std::optional<Region> region;
    for (Region r : kAllRegions) {
      if (country_key(to_string(r)) == region_text) region = r;
    }
    if (!region) {
      throw Error(ErrorCode::Schema, "region map line " + std::to_string(line_no) +
                                         ": unknown region '" + line.substr(comma + 1) + "'");
    }
    map.table_[country_key(line.substr(0, comma))] = *region;
  }
  if (!header_seen) throw Error(ErrorCode::Schema, "region map: empty file");
  return map;
}

RegionMap RegionMap::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open region map '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_csv(ss.str());
}

Region RegionMap::assign(std::string_view country) const {
  const auto it = table_.find(country_key(country));
  return it == table_.end() ? Region::Other : it->second;
}

bool RegionMap::contains(std::string_view country) const {
  return table_.count(country_key(country)) != 0;
}

Region assign_region(std::string_view country) { return RegionMap::builtin().assign(country); }

Cohort assign_cohort(int year, CohortBoundary boundary) {
  const int first_bucket_end = boundary.pre1980_includes_1980 ? 1980 : 1979;
  if (year <= first_bucket_end) return Cohort::Pre1980;
  if (year <= 1989) return Cohort::Y1980_1989;
  if (year <= 1994) return Cohort::Y1990_1994;
  if (year <= 1999) return Cohort::Y1995_1999;
  if (year <= 2004) return Cohort::Y2000_2004;
  return Cohort::Y2005plus;
}

}  // namespace citestat
