#pragma once

#if __has_include(<json.hpp>)
#include <json.hpp>
#else
#include <nlohmann/json.hpp>
#endif

#include <bit>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "cskpa/attack_lab.hpp"
#include "cskpa/crypto.hpp"
#include "cskpa/ehrhart.hpp"
#include "cskpa/errors.hpp"
#include "cskpa/keystream.hpp"
#include "cskpa/protocols.hpp"
#include "cskpa/recovery.hpp"
#include "cskpa/ssp.hpp"
#include "cskpa/ssp_enumerate.hpp"

#ifndef CSKPA_VERSION
#define CSKPA_VERSION "0.0.0"
#endif

namespace cskpa {

using Json = nlohmann::ordered_json;

inline constexpr const char* kCsvSchema = "# schema=v1";

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

inline Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(what + ": " + e.what());
  }
}

/// Shortest round-trip decimal form; identical across runs and platforms.
inline std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

/// CSV with a leading schema line and a column header.
class CsvWriter {
public:
  explicit CsvWriter(std::initializer_list<std::string> columns) : width_(columns.size()) {
    os_ << kCsvSchema << '\n';
    bool first = true;
    for (const auto& c : columns) {
      os_ << (first ? "" : ",") << c;
      first = false;
    }
    os_ << '\n';
  }

  void row(const std::vector<std::string>& cells) {
    detail::require(cells.size() == width_, "CsvWriter: row width does not match header");
    for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
    os_ << '\n';
  }

  std::string str() const { return os_.str(); }
  void save(const std::filesystem::path& path) const { write_text(path, str()); }

private:
  std::size_t width_;
  std::ostringstream os_;
};

// Key material

inline Json key_to_json(const Keystream& key) {
  return Json{{"seed_hex", key.seed_hex()}, {"taps", key.spec().taps}, {"B_key", key.degree()}};
}

inline Keystream key_from_json(const Json& j) {
  try {
    const auto seed = std::stoull(j.at("seed_hex").get<std::string>(), nullptr, 16);
    return Keystream(j.at("B_key").get<unsigned>(), j.at("taps").get<std::vector<unsigned>>(), seed);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("key JSON: ") + e.what());
  } catch (const std::logic_error& e) {
    throw IoError(std::string("key JSON: bad seed_hex: ") + e.what());
  }
}

// Matrices and flip sets: magic, u32 rows, u32 cols, then m*n bits row-major,
// least significant bit first, padded to a whole byte.

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffU));
}

inline std::uint32_t get_u32(const std::string& in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  return v;
}

inline std::string pack_grid(const char* magic, std::size_t m, std::size_t n, const std::vector<bool>& bits) {
  std::string out(magic, 4);
  put_u32(out, static_cast<std::uint32_t>(m));
  put_u32(out, static_cast<std::uint32_t>(n));
  std::string body((bits.size() + 7) / 8, '\0');
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) body[i / 8] = static_cast<char>(static_cast<unsigned char>(body[i / 8]) | (1U << (i % 8)));
  }
  return out + body;
}

inline std::vector<bool> unpack_grid(const std::string& in, const char* magic, std::size_t& m, std::size_t& n) {
  if (in.size() < 12 || in.compare(0, 4, magic) != 0) throw IoError(std::string("binary grid: expected magic ") + magic);
  m = get_u32(in, 4);
  n = get_u32(in, 8);
  const std::size_t count = m * n;
  if (in.size() != 12 + (count + 7) / 8) throw IoError("binary grid: truncated or oversized payload");
  std::vector<bool> bits(count);
  for (std::size_t i = 0; i < count; ++i) bits[i] = (static_cast<unsigned char>(in[12 + i / 8]) >> (i % 8)) & 1U;
  return bits;
}

}  // namespace detail

inline std::string matrix_to_binary(const AntipodalMatrix& a) {
  std::vector<bool> bits(a.data().size());
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = a.data()[i] > 0;
  return detail::pack_grid("CSAM", a.rows(), a.cols(), bits);
}

inline AntipodalMatrix matrix_from_binary(const std::string& in) {
  std::size_t m = 0, n = 0;
  const auto bits = detail::unpack_grid(in, "CSAM", m, n);
  std::vector<std::int8_t> e(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) e[i] = bits[i] ? 1 : -1;
  return AntipodalMatrix(m, n, std::move(e));
}

inline std::string flips_to_binary(const FlipSet& f) {
  std::vector<bool> bits(f.rows() * f.cols());
  for (auto [j, l] : f.pairs()) bits[j * f.cols() + l] = true;
  return detail::pack_grid("CSFS", f.rows(), f.cols(), bits);
}

inline FlipSet flips_from_binary(const std::string& in) {
  std::size_t m = 0, n = 0;
  const auto bits = detail::unpack_grid(in, "CSFS", m, n);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) pairs.emplace_back(i / n, i % n);
  }
  return FlipSet(m, n, std::move(pairs));
}

inline Json matrix_to_json(const AntipodalMatrix& a) {
  Json rows = Json::array();
  for (std::size_t j = 0; j < a.rows(); ++j) rows.push_back(std::vector<int>(a.row(j).begin(), a.row(j).end()));
  return Json{{"m", a.rows()}, {"n", a.cols()}, {"rows", rows}};
}

inline AntipodalMatrix matrix_from_json(const Json& j) {
  try {
    std::vector<std::vector<std::int8_t>> rows;
    for (const auto& r : j.at("rows")) rows.push_back(r.get<std::vector<std::int8_t>>());
    auto a = AntipodalMatrix::from_rows(rows);
    if (j.contains("n") && a.rows() == 0) return AntipodalMatrix(0, j.at("n").get<std::size_t>(), {});
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("matrix JSON: ") + e.what());
  }
}

inline Json flips_to_json(const FlipSet& f) {
  Json pairs = Json::array();
  for (auto [j, l] : f.pairs()) pairs.push_back({j, l});
  return Json{{"m", f.rows()}, {"n", f.cols()}, {"pairs", pairs}, {"row_counts", std::vector<std::size_t>(f.row_counts().begin(), f.row_counts().end())}};
}

inline FlipSet flips_from_json(const Json& j) {
  try {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (const auto& p : j.at("pairs")) pairs.emplace_back(p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>());
    return FlipSet(j.at("m").get<std::size_t>(), j.at("n").get<std::size_t>(), std::move(pairs));
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("flip set JSON: ") + e.what());
  }
}

// Instances

inline Json instance_to_json(const SspInstance& inst, std::optional<std::uint64_t> gamma = std::nullopt) {
  Json j{{"u", inst.weights}, {"upsilon", inst.target}};
  if (gamma) j["gamma"] = *gamma;
  if (inst.true_solution) {
    const auto bits = unpack_bits(*inst.true_solution, inst.size());
    j["b_true"] = std::vector<int>(bits.begin(), bits.end());
  }
  return j;
}

inline Json instance_to_json(const GammaSspInstance& inst) {
  return instance_to_json(static_cast<const SspInstance&>(inst), inst.cardinality);
}

/// Parsed instance; `gamma` is set when the JSON carries a cardinality.
struct LoadedInstance {
  GammaSspInstance instance;
  bool constrained = false;
};

inline LoadedInstance instance_from_json(const Json& j) {
  LoadedInstance out;
  try {
    out.instance.weights = j.at("u").get<std::vector<std::uint64_t>>();
    out.instance.target = j.at("upsilon").get<std::uint64_t>();
    if (j.contains("gamma")) {
      out.constrained = true;
      out.instance.cardinality = j.at("gamma").get<std::uint64_t>();
    }
    if (j.contains("b_true")) {
      const auto bits = j.at("b_true").get<std::vector<std::uint8_t>>();
      detail::require(bits.size() == out.instance.size(), "instance JSON: b_true length differs from u");
      out.instance.true_solution = pack_bits(bits);
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("instance JSON: ") + e.what());
  }
  if (out.constrained) {
    out.instance.validate();
  } else {
    static_cast<const SspInstance&>(out.instance).validate();
  }
  return out;
}

// Result tables

inline CsvWriter solutions_csv(const SolutionSet& set, std::optional<BitVector> reference) {
  CsvWriter csv{"bits", "hamming"};
  for (auto b : set.members) {
    csv.row({bit_string(b, set.n), reference ? std::to_string(std::popcount(b ^ *reference)) : std::string()});
  }
  return csv;
}

inline CsvWriter ph_table_csv(const PhTable& table, unsigned max_h) {
  CsvWriter csv{"h", "j", "numerator", "denominator"};
  for (unsigned h = 2; h <= max_h; ++h) {
    const auto& poly = table(h);
    for (int j = 1; j <= poly.degree(); ++j) {
      const auto c = poly.coefficient(static_cast<std::size_t>(j));
      csv.row({std::to_string(h), std::to_string(j), boost::multiprecision::numerator(c).str(),
               boost::multiprecision::denominator(c).str()});
    }
  }
  return csv;
}

inline CsvWriter eta_csv(const std::vector<EtaPoint>& curve) {
  CsvWriter csv{"eta", "mean_rsnr_db", "std_db", "n_seeds"};
  for (const auto& p : curve) {
    csv.row({format_double(p.eta), format_double(p.mean_rsnr_db), format_double(p.std_db), std::to_string(p.n_seeds)});
  }
  return csv;
}

inline CsvWriter kpa_csv(const KpaExperiment& exp) {
  CsvWriter csv{"candidate_id", "rsnr1_db", "rsnr2_db", "draws_total"};
  for (const auto& r : exp.records) {
    csv.row({std::to_string(r.candidate_id), format_double(r.rsnr1_db), format_double(r.rsnr2_db),
             std::to_string(r.draws_total)});
  }
  return csv;
}

/// Sample means against predictions; theory is written both as a double and
/// in log2 so that plots need no arithmetic of their own.
inline CsvWriter count_points_csv(const std::vector<CountPoint>& points, std::int64_t bound) {
  CsvWriter csv{"n", "h", "L", "instances", "mean_count", "theory_count", "log2_theory"};
  for (const auto& p : points) {
    csv.row({std::to_string(p.n), std::to_string(p.h), std::to_string(bound), std::to_string(p.instances),
             format_double(p.mean_count), format_double(p.theory.value()), format_double(p.theory.log2())});
  }
  return csv;
}

inline Json count_to_json(const LogCount& c) {
  return Json{{"log2_count", c.log2()}, {"log10_count", c.log10()}, {"decimal_string", c.str(3)}};
}

inline Json kpa_summary_json(const KpaSummary& s) {
  return Json{{"candidates", s.candidates},
              {"mean_rsnr1_db", s.mean_rsnr1_db},
              {"mean_rsnr2_db", s.mean_rsnr2_db},
              {"std_rsnr2_db", s.std_rsnr2_db},
              {"correlation", std::isnan(s.correlation) ? Json(nullptr) : Json(s.correlation)},
              {"nominal_second_class_db", s.nominal_second_class_db},
              {"control_rsnr1_db", s.control_rsnr1_db},
              {"control_rsnr2_db", s.control_rsnr2_db},
              {"mean_draws_per_row", s.mean_draws_per_row},
              {"expected_draws_per_row", s.expected_draws_per_row},
              {"exact_candidates", s.exact_candidates},
              {"flips", s.flips}};
}

/// Run summary carrying everything needed to repeat the run.
inline Json run_summary(const std::string& command, const Json& config, std::uint64_t seed, const Json& results) {
  return Json{{"command", command}, {"version", CSKPA_VERSION}, {"seed", seed}, {"config", config}, {"results", results}};
}

}  // namespace cskpa
