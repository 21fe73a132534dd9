#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

namespace citestat {

enum class Gender { Male, Female, Unknown };

enum class Region { NorthAmerica, UK, OtherEurope, AustraliaNZ, Other };

enum class Cohort { Pre1980, Y1980_1989, Y1990_1994, Y1995_1999, Y2000_2004, Y2005plus };

inline constexpr std::array<Region, 5> kAllRegions{
    Region::NorthAmerica, Region::UK, Region::OtherEurope, Region::AustraliaNZ, Region::Other};
inline constexpr std::array<Gender, 3> kAllGenders{Gender::Male, Gender::Female, Gender::Unknown};
inline constexpr std::array<Cohort, 6> kAllCohorts{Cohort::Pre1980,    Cohort::Y1980_1989,
                                                   Cohort::Y1990_1994, Cohort::Y1995_1999,
                                                   Cohort::Y2000_2004, Cohort::Y2005plus};

// Identifiers used in files ("NorthAmerica", "male", "Y1990_1994").
std::string_view to_string(Region r);
std::string_view to_string(Gender g);
std::string_view to_string(Cohort c);
std::optional<Region> parse_region(std::string_view s);
std::optional<Gender> parse_gender(std::string_view s);

// Row labels as printed in tables ("North America", "Male", "1990-1994").
std::string_view display_label(Region r);
std::string_view display_label(Gender g);
std::string_view display_label(Cohort c);

/// Country -> region lookup loaded from a "country,region" CSV. Matching is
/// case-insensitive and whitespace-tolerant; unlisted countries map to Other.
class RegionMap {
 public:
  /// The table shipped in core/data/region_map.csv.
  static const RegionMap& builtin();
  static RegionMap from_csv(std::string_view csv_text);
  static RegionMap from_file(const std::string& path);

  Region assign(std::string_view country) const;
  bool contains(std::string_view country) const;
  std::size_t size() const noexcept { return table_.size(); }

 private:
  std::unordered_map<std::string, Region> table_;
};

/// Region via the builtin table.
Region assign_region(std::string_view country);

struct CohortBoundary {
  // The first bucket is "-1980". By default that means <= 1979 so it does
  // not overlap "1980-1989"; set to put 1980 in the first bucket instead.
  bool pre1980_includes_1980 = false;
};

Cohort assign_cohort(int first_pub_year, CohortBoundary boundary = {});

}  // namespace citestat
