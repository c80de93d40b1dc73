#include "amlnet/risk_tables.hpp"

#include <array>
#include <charconv>
#include <fstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "amlnet/error.hpp"
#include "csv.hpp"

namespace amlnet {

namespace {

double parse_number(const std::string& text, std::size_t row,
                    std::string_view column) {
  std::string t = csv::trim(text);
  double value = 0.0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc{} || p != t.data() + t.size()) {
    throw ValidationError(
        fmt::format("column '{}': not a number '{}'", column, t), row);
  }
  return value;
}

bool parse_flag(const std::string& text, std::size_t row,
                std::string_view column) {
  std::string t = csv::trim(text);
  for (auto& c : t) c = static_cast<char>(std::tolower(c));
  if (t == "1" || t == "true" || t == "yes") return true;
  if (t == "0" || t == "false" || t == "no") return false;
  throw ValidationError(
      fmt::format("column '{}': expected 0/1, got '{}'", column, t), row);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("cannot open '" + path.string() + "'");
  }
  return in;
}

}  // namespace

std::optional<SectorClass> RiskTables::resolve_sector(
    std::string_view code) const {
  if (auto it = sector_class.find(code); it != sector_class.end()) {
    return it->second;
  }
  return default_sector_class;
}

void RiskTables::validate() const {
  if (amount_bins.size() != 2) {
    throw ValidationError("amount_bins must hold exactly two thresholds");
  }
  if (amount_bins[0].cents <= 0 || !(amount_bins[0] < amount_bins[1])) {
    throw ValidationError("amount_bins must be positive and strictly increasing");
  }
  if (recording_threshold.cents <= 0) {
    throw ValidationError("recording_threshold must be positive");
  }
  if (aggregation_window_days <= 0) {
    throw ValidationError("aggregation_window must be positive");
  }
}

RiskTables RiskTables::defaults() {
  RiskTables t;
  static constexpr std::array<std::string_view, 18> kHigh{
      "public_procurement",   "construction",
      "ferrous_materials",    "car_sales",
      "road_haulage",         "high_tech_sales",
      "cleaning_maintenance", "consultancy",
      "precious_metals",      "artworks_sales",
      "oil_grain_wholesale",  "advertising",
      "online_it_services",   "supermarket",
      "betting_gambling",     "weapons_explosives",
      "waste_management",     "waste_water_treatment"};
  static constexpr std::array<std::string_view, 12> kLow{
      "agriculture",     "food_production", "textiles",
      "furniture",       "pharmaceuticals", "chemicals",
      "machinery",       "retail_clothing", "tourism",
      "publishing",      "healthcare",      "education"};
  for (auto s : kHigh) t.sector_class.emplace(s, SectorClass::High);
  for (auto s : kLow) t.sector_class.emplace(s, SectorClass::Low);
  t.default_sector_class = SectorClass::Low;

  struct R {
    const char* name;
    double crime;
    double ops;
    bool mafia;
  };
  static constexpr std::array<R, 20> kRegions{{
      {"Abruzzo", 3.2, 1500, false},
      {"Basilicata", 2.4, 420, false},
      {"Calabria", 3.4, 2400, true},
      {"Campania", 4.0, 11800, true},
      {"Emilia-Romagna", 5.1, 6900, false},
      {"Friuli-Venezia Giulia", 3.3, 1500, false},
      {"Lazio", 5.3, 11300, false},
      {"Liguria", 5.2, 2300, false},
      {"Lombardia", 4.9, 18500, false},
      {"Marche", 3.5, 1700, false},
      {"Molise", 2.7, 300, false},
      {"Piemonte", 4.6, 5700, false},
      {"Puglia", 3.6, 5200, true},
      {"Sardegna", 3.1, 1100, false},
      {"Sicilia", 3.9, 5300, true},
      {"Toscana", 4.8, 5800, false},
      {"Trentino-Alto Adige", 3.6, 800, false},
      {"Umbria", 4.0, 900, false},
      {"Valle d'Aosta", 3.0, 150, false},
      {"Veneto", 3.9, 6900, false},
  }};
  for (const auto& r : kRegions) {
    t.region_indicators.emplace(r.name,
                                RegionIndicators{r.crime, r.ops, r.mafia});
  }

  struct C {
    const char* code;
    bool white;
    bool haven;
    bool ocse;
    double cpi;
    bool fatf;
  };
  static constexpr std::array<C, 16> kCountries{{
      {"IT", true, false, true, 43, false},
      {"FR", true, false, true, 69, false},
      {"DE", true, false, true, 79, false},
      {"ES", true, false, true, 60, false},
      {"GB", true, false, true, 78, false},
      {"US", true, false, true, 74, false},
      {"MT", true, false, true, 55, false},
      {"CH", true, true, true, 86, false},
      {"LU", true, true, true, 82, false},
      {"SM", false, true, true, 55, false},
      {"RO", true, false, true, 43, false},
      {"CN", false, false, true, 36, false},
      {"RU", false, false, true, 27, false},
      {"AE", false, true, false, 70, false},
      {"PA", false, true, false, 37, false},
      {"IR", false, false, false, 27, true},
  }};
  for (const auto& c : kCountries) {
    t.country_indicators.emplace(
        c.code, CountryIndicators{c.white, c.haven, c.ocse, c.cpi, c.fatf});
  }
  return t;
}

std::map<std::string, SectorClass, std::less<>> parse_sectors_csv(
    std::istream& in) {
  auto table = csv::read(in);
  static constexpr std::array<std::string_view, 2> kCols{"sector_code",
                                                          "class"};
  std::map<std::string, SectorClass, std::less<>> out;
  if (table.header.empty()) return out;
  auto pos = csv::require_columns(table, kCols);
  for (const auto& row : table.rows) {
    if (row.fields.size() != table.header.size()) {
      throw ValidationError("wrong number of fields", row.number);
    }
    std::string code = csv::trim(row.fields[pos[0]]);
    std::string cls = csv::trim(row.fields[pos[1]]);
    if (code.empty()) throw ValidationError("empty sector_code", row.number);
    SectorClass value;
    if (cls == "HIGH") {
      value = SectorClass::High;
    } else if (cls == "LOW") {
      value = SectorClass::Low;
    } else {
      throw ValidationError("class must be LOW or HIGH, got '" + cls + "'",
                            row.number);
    }
    if (!out.emplace(code, value).second) {
      throw ValidationError("duplicate sector_code '" + code + "'",
                            row.number);
    }
  }
  return out;
}

std::map<std::string, RegionIndicators, std::less<>> parse_regions_csv(
    std::istream& in) {
  auto table = csv::read(in);
  static constexpr std::array<std::string_view, 4> kCols{
      "region", "crime_rate", "suspicious_ops", "mafia_presence"};
  std::map<std::string, RegionIndicators, std::less<>> out;
  if (table.header.empty()) return out;
  auto pos = csv::require_columns(table, kCols);
  for (const auto& row : table.rows) {
    if (row.fields.size() != table.header.size()) {
      throw ValidationError("wrong number of fields", row.number);
    }
    std::string name = csv::trim(row.fields[pos[0]]);
    if (name.empty() || name == kForeignRegion) {
      throw ValidationError("invalid region name '" + name + "'", row.number);
    }
    RegionIndicators ind{
        parse_number(row.fields[pos[1]], row.number, kCols[1]),
        parse_number(row.fields[pos[2]], row.number, kCols[2]),
        parse_flag(row.fields[pos[3]], row.number, kCols[3])};
    if (!out.emplace(name, ind).second) {
      throw ValidationError("duplicate region '" + name + "'", row.number);
    }
  }
  return out;
}

std::map<std::string, CountryIndicators, std::less<>> parse_countries_csv(
    std::istream& in) {
  auto table = csv::read(in);
  static constexpr std::array<std::string_view, 6> kCols{
      "country", "white_list", "tax_haven", "ocse_compliant", "cpi",
      "fatf_listed"};
  std::map<std::string, CountryIndicators, std::less<>> out;
  if (table.header.empty()) return out;
  auto pos = csv::require_columns(table, kCols);
  for (const auto& row : table.rows) {
    if (row.fields.size() != table.header.size()) {
      throw ValidationError("wrong number of fields", row.number);
    }
    std::string code = csv::trim(row.fields[pos[0]]);
    if (code.size() != 2) {
      throw ValidationError("country must be ISO-3166 alpha-2, got '" + code +
                                "'",
                            row.number);
    }
    CountryIndicators ind{
        parse_flag(row.fields[pos[1]], row.number, kCols[1]),
        parse_flag(row.fields[pos[2]], row.number, kCols[2]),
        parse_flag(row.fields[pos[3]], row.number, kCols[3]),
        parse_number(row.fields[pos[4]], row.number, kCols[4]),
        parse_flag(row.fields[pos[5]], row.number, kCols[5])};
    if (!out.emplace(code, ind).second) {
      throw ValidationError("duplicate country '" + code + "'", row.number);
    }
  }
  return out;
}

RiskTables load_risk_tables(const std::filesystem::path& config_path) {
  namespace pt = boost::property_tree;
  if (!std::filesystem::exists(config_path)) {
    throw ValidationError("risk tables config not found: '" +
                          config_path.string() + "'");
  }
  pt::ptree ini;
  try {
    pt::read_ini(config_path.string(), ini);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  const auto base = config_path.parent_path();
  auto table_path = [&](const char* key) {
    auto value = ini.get_optional<std::string>(std::string("tables.") + key);
    if (!value) {
      throw ValidationError(std::string("config: missing tables.") + key);
    }
    std::filesystem::path p(csv::trim(*value));
    return p.is_absolute() ? p : base / p;
  };

  RiskTables t;
  try {
    auto in = open_input(table_path("sectors"));
    t.sector_class = parse_sectors_csv(in);
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("sectors: ") + e.what());
  }
  if (auto it = t.sector_class.find(kSectorWildcard);
      it != t.sector_class.end()) {
    t.default_sector_class = it->second;
    t.sector_class.erase(it);
  }
  try {
    auto in = open_input(table_path("regions"));
    t.region_indicators = parse_regions_csv(in);
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("regions: ") + e.what());
  }
  try {
    auto in = open_input(table_path("countries"));
    t.country_indicators = parse_countries_csv(in);
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("countries: ") + e.what());
  }

  if (auto bins = ini.get_optional<std::string>("thresholds.amount_bins")) {
    t.amount_bins.clear();
    for (const auto& part : csv::split(*bins, ',')) {
      t.amount_bins.push_back(parse_amount(part));
    }
  }
  if (auto v = ini.get_optional<std::string>(
          "thresholds.recording_threshold")) {
    t.recording_threshold = parse_amount(*v);
  }
  if (auto v = ini.get_optional<std::string>("thresholds.aggregation_window")) {
    t.aggregation_window_days =
        static_cast<int>(parse_number(*v, 0, "aggregation_window"));
  }
  if (auto v = ini.get_optional<std::string>("thresholds.cpi_cutoff")) {
    t.cpi_cutoff = parse_number(*v, 0, "cpi_cutoff");
  }
  t.validate();
  return t;
}

void write_risk_tables(const RiskTables& tables,
                       const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw IoError("cannot write '" + (dir / name).string() + "'");
    return out;
  };
  {
    auto out = open("risk.ini");
    out << "[tables]\nsectors = sectors.csv\nregions = regions.csv\n"
           "countries = countries.csv\n\n[thresholds]\n";
    out << "amount_bins = ";
    for (std::size_t i = 0; i < tables.amount_bins.size(); ++i) {
      out << (i ? ", " : "") << format_amount(tables.amount_bins[i]);
    }
    out << "\nrecording_threshold = "
        << format_amount(tables.recording_threshold)
        << "\naggregation_window = " << tables.aggregation_window_days
        << "\ncpi_cutoff = " << fmt::format("{}", tables.cpi_cutoff) << "\n";
  }
  {
    auto out = open("sectors.csv");
    out << "sector_code,class\n";
    for (const auto& [code, cls] : tables.sector_class) {
      csv::write_field(out, code);
      out << (cls == SectorClass::High ? ",HIGH\n" : ",LOW\n");
    }
    if (tables.default_sector_class) {
      out << "*,"
          << (*tables.default_sector_class == SectorClass::High ? "HIGH"
                                                                 : "LOW")
          << '\n';
    }
  }
  {
    auto out = open("regions.csv");
    out << "region,crime_rate,suspicious_ops,mafia_presence\n";
    for (const auto& [name, r] : tables.region_indicators) {
      csv::write_field(out, name);
      out << fmt::format(",{},{},{}\n", r.crime_rate, r.suspicious_ops,
                         r.mafia_presence ? 1 : 0);
    }
  }
  {
    auto out = open("countries.csv");
    out << "country,white_list,tax_haven,ocse_compliant,cpi,fatf_listed\n";
    for (const auto& [code, c] : tables.country_indicators) {
      out << fmt::format("{},{},{},{},{},{}\n", code, int(c.white_list),
                         int(c.tax_haven), int(c.ocse_compliant), c.cpi,
                         int(c.fatf_listed));
    }
  }
}

}  // namespace amlnet
