#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <json.hpp>

#include "bitomo/operator_bases.hpp"
#include "bitomo/serialization.hpp"
#include "bitomo/tomography.hpp"

using namespace bitomo;

namespace {

DensityMatrix sample_real_state() {
  Eigen::MatrixXcd mat(2, 2);
  mat << 0.75, 0.25, 0.25, 0.25;
  return make_density(mat, FieldKind::Real);
}

DensityMatrix sample_complex_state() {
  Eigen::MatrixXcd mat(2, 2);
  mat << 0.5, std::complex<double>(0.0, -0.5), std::complex<double>(0.0, 0.5),
      0.5;
  return make_density(mat, FieldKind::Complex);
}

}  // namespace

TEST_CASE("JsonValue formats scalars deterministically", "[io]") {
  CHECK(JsonValue::number(0.1).dump(0) == "0.10000000000000001\n");
  CHECK(JsonValue::number(1.0).dump(0) == "1\n");
  CHECK(JsonValue::number(static_cast<std::int64_t>(136)).dump(0) == "136\n");
  CHECK(JsonValue::exact(static_cast<std::int64_t>(-7)).dump(0) == "\"-7\"\n");
  CHECK(JsonValue::exact(Rational(-4, 3)).dump(0) == "\"-4/3\"\n");
  CHECK(JsonValue::boolean(true).dump(0) == "true\n");
  CHECK(JsonValue::null().dump(0) == "null\n");
  CHECK(JsonValue::str("a\"b\\c\n").dump(0) == "\"a\\\"b\\\\c\\n\"\n");
}

TEST_CASE("JsonValue objects keep insertion order", "[io]") {
  JsonValue doc = JsonValue::object();
  doc.add("zeta", JsonValue::number(static_cast<std::int64_t>(1)));
  doc.add("alpha", JsonValue::number(static_cast<std::int64_t>(2)));
  JsonValue arr = JsonValue::array();
  arr.push(JsonValue::str("x"));
  arr.push(JsonValue::null());
  doc.add("items", std::move(arr));

  const std::string text = doc.dump();
  CHECK(text ==
        "{\n"
        "  \"zeta\": 1,\n"
        "  \"alpha\": 2,\n"
        "  \"items\": [\n"
        "    \"x\",\n"
        "    null\n"
        "  ]\n"
        "}\n");
  CHECK(doc.dump() == text);
}

TEST_CASE("state serialization round trips", "[io]") {
  for (const DensityMatrix& rho :
       {sample_real_state(), sample_complex_state()}) {
    const std::string text = print_state(rho);
    const DensityMatrix back = parse_state(text);
    CHECK(back.field == rho.field);
    CHECK(back.dim() == rho.dim());
    CHECK((back.op.mat - rho.op.mat).cwiseAbs().maxCoeff() <= kParseTol);
    CHECK(print_state(back) == text);
  }
}

TEST_CASE("parsed state documents are validated", "[io]") {
  const std::string good = print_state(sample_real_state());

  SECTION("invalid JSON") {
    CHECK_THROWS_AS(parse_state("{ not json"), MalformedInputError);
  }
  SECTION("missing keys") {
    CHECK_THROWS_AS(parse_state("{}"), MalformedInputError);
    CHECK_THROWS_AS(parse_state(R"({"dim": 2, "field": "real"})"),
                    MalformedInputError);
  }
  SECTION("entry count must match dim") {
    nlohmann::json doc = nlohmann::json::parse(good);
    doc["entries"].erase(doc["entries"].size() - 1);
    CHECK_THROWS_AS(parse_state(doc.dump()), MalformedInputError);
  }
  SECTION("entries must be two-element numeric pairs") {
    nlohmann::json doc = nlohmann::json::parse(good);
    doc["entries"][0] = nlohmann::json::array({1.0});
    CHECK_THROWS_AS(parse_state(doc.dump()), MalformedInputError);
    doc = nlohmann::json::parse(good);
    doc["entries"][0] = nlohmann::json::array({"a", "b"});
    CHECK_THROWS_AS(parse_state(doc.dump()), MalformedInputError);
  }
  SECTION("unknown field label") {
    nlohmann::json doc = nlohmann::json::parse(good);
    doc["field"] = "quaternionic";
    CHECK_THROWS_AS(parse_state(doc.dump()), MalformedInputError);
  }
  SECTION("state content is validated, not just shape") {
    nlohmann::json doc = nlohmann::json::parse(good);
    doc["entries"][0][0] = -1.0;
    CHECK_THROWS_AS(parse_state(doc.dump()), InvalidStateError);
    doc = nlohmann::json::parse(good);
    doc["entries"][1][1] = 0.25;
    CHECK_THROWS_AS(parse_state(doc.dump()), InvalidStateError);
  }
}

TEST_CASE("states load from files", "[io]") {
  const DensityMatrix rho = sample_complex_state();
  const std::string path = "bitomo_io_test_state.json";
  {
    std::ofstream out(path);
    out << print_state(rho);
  }
  const DensityMatrix back = load_state(path);
  CHECK(back.field == FieldKind::Complex);
  CHECK((back.op.mat - rho.op.mat).cwiseAbs().maxCoeff() <= kParseTol);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_state(path), MalformedInputError);
}

TEST_CASE("basis serialization exposes labels and operators", "[io]") {
  const OperatorBasis basis = complex_projector_basis(2);
  const nlohmann::json doc = nlohmann::json::parse(basis_to_json(basis).dump());

  CHECK(doc.at("dim") == 2);
  CHECK(doc.at("kind") == "complex-projector");
  CHECK(doc.at("count") == 4);
  REQUIRE(doc.at("labels").size() == 4);
  CHECK(doc.at("labels")[0] == "d1");
  CHECK(doc.at("labels")[2] == "x1-2");
  REQUIRE(doc.at("operators").size() == 4);
  REQUIRE(doc.at("operators")[0].size() == 4);
  CHECK(doc.at("operators")[0][0][0].get<double>() == 1.0);
  CHECK(doc.at("operators")[0][0][1].get<double>() == 0.0);

  const nlohmann::json y_op = doc.at("operators")[3];
  CHECK(y_op[1][1] == -0.5);
  CHECK(y_op[2][1] == 0.5);
}
