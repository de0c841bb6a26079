#include <gtest/gtest.h>

#include <filesystem>

#include "cskpa/io.hpp"

using namespace cskpa;

TEST(KeyJson, RoundTrip) {
  const auto key = Keystream::default_lfsr(0xBEEF);
  const auto back = key_from_json(parse_json(key_to_json(key).dump(), "key"));
  EXPECT_EQ(back.bits(200), key.bits(200));
  EXPECT_EQ(back.degree(), 32U);
  EXPECT_THROW(key_from_json(Json{{"seed_hex", "zz"}, {"taps", {3, 1}}, {"B_key", 3}}), IoError);
  EXPECT_THROW(key_from_json(Json{{"taps", {3, 1}}}), IoError);
}

TEST(MatrixIo, BinaryAndJsonRoundTrip) {
  const auto a = expand_matrix(EngineKey(3), 7, 13, 0);
  const auto bin = matrix_to_binary(a);
  EXPECT_EQ(bin.substr(0, 4), "CSAM");
  EXPECT_EQ(bin.size(), 4U + 8U + (7U * 13U + 7U) / 8U);
  EXPECT_EQ(matrix_from_binary(bin).hamming_distance(a), 0U);
  EXPECT_EQ(matrix_from_json(matrix_to_json(a)).hamming_distance(a), 0U);
  EXPECT_THROW(matrix_from_binary("XXXX" + bin.substr(4)), IoError);
  EXPECT_THROW(matrix_from_binary(bin.substr(0, bin.size() - 1)), IoError);
}

TEST(FlipIo, RoundTrip) {
  const FlipSet f(4, 5, {{0, 1}, {3, 4}, {2, 0}});
  const auto bin = flips_to_binary(f);
  EXPECT_EQ(bin.substr(0, 4), "CSFS");
  const auto back = flips_from_binary(bin);
  EXPECT_EQ(std::vector(back.pairs().begin(), back.pairs().end()), std::vector(f.pairs().begin(), f.pairs().end()));
  const auto j = flips_from_json(flips_to_json(f));
  EXPECT_EQ(j.size(), 3U);
  EXPECT_TRUE(j.contains(3, 4));
}

TEST(InstanceJson, RoundTripBothKinds) {
  SspInstance plain;
  plain.weights = {1, 1, 2};
  plain.target = 2;
  plain.true_solution = 0b100;
  const auto p = instance_from_json(instance_to_json(plain));
  EXPECT_FALSE(p.constrained);
  EXPECT_EQ(p.instance.weights, plain.weights);
  EXPECT_EQ(p.instance.true_solution, plain.true_solution);

  GammaSspInstance g;
  g.weights = {4, 6, 8};
  g.target = 10;
  g.cardinality = 2;
  g.weight_bound = 8;
  const auto q = instance_from_json(instance_to_json(g));
  EXPECT_TRUE(q.constrained);
  EXPECT_EQ(q.instance.cardinality, 2U);
  EXPECT_THROW(instance_from_json(Json{{"u", {1, 2}}}), IoError);
  EXPECT_THROW(instance_from_json(Json{{"u", {1, 2}}, {"upsilon", 1}, {"b_true", {1}}}), DomainError);
}

TEST(Csv, SchemaLineAndWidth) {
  CsvWriter csv{"a", "b"};
  csv.row({"1", "2"});
  EXPECT_EQ(csv.str(), "# schema=v1\na,b\n1,2\n");
  EXPECT_THROW(csv.row({"1"}), DomainError);
  const auto ph = ph_table_csv(PhTable(4), 4).str();
  EXPECT_NE(ph.find("4,1,14,3\n"), std::string::npos);
  EXPECT_NE(ph.find("4,2,-4,1\n"), std::string::npos);
}

TEST(Files, ReadWriteAndMissing) {
  const auto dir = std::filesystem::temp_directory_path() / "cskpa_io_test";
  write_text(dir / "x.json", R"({"u":[1,1,2],"upsilon":2})");
  const auto j = parse_json(read_text(dir / "x.json"), "x.json");
  EXPECT_EQ(j.at("upsilon"), 2);
  std::filesystem::remove_all(dir);
  EXPECT_THROW(read_text(dir / "x.json"), IoError);
  EXPECT_THROW(parse_json("{", "bad"), IoError);
}

TEST(Summary, CarriesSeedAndVersion) {
  const auto s = run_summary("count", Json{{"n", 3}}, 42, count_to_json(LogCount::from_value(2.0)));
  EXPECT_EQ(s.at("seed"), 42);
  EXPECT_TRUE(s.contains("version"));
  EXPECT_EQ(s.at("results").at("decimal_string"), "2.00e0");
}
