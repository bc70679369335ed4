#include "helpers.hpp"

#include "saferisk/error.hpp"
#include "saferisk/riskcore.hpp"

#include <doctest.h>

#include <random>

using namespace saferisk;

namespace {

std::vector<std::string> names(std::initializer_list<const char*> xs)
{
  return { xs.begin(), xs.end() };
}

double shown(const AttributeCatalog& cat, Basis b, std::initializer_list<const char*> attrs)
{
  return display_round(situation_risk(catalog_relative_risks(cat, b), names(attrs)));
}

} // namespace

TEST_SUITE("riskcore")
{
  TEST_CASE("worked example arithmetic")
  {
    const double total = attribute_total_risk({ 0, 15, 10, 1, 0 }, SeverityScale{});
    CHECK(total == 3664.0);
    CHECK(display_round(attribute_relative_risk(total, 0.65)) == 5637.0);
    CHECK(display_round(attribute_relative_risk(total, 0.07)) == 52343.0);
    // counts (1, 0, 0, 1, 0) at 1/27 exposure: (12 + 1024) / (1/27)
    CHECK(display_round(attribute_relative_risk(attribute_total_risk({ 1, 0, 0, 1, 0 }, SeverityScale{}), 1.0 / 27.0)) ==
          27972.0);
    CHECK_THROWS_AS(attribute_relative_risk(1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(attribute_relative_risk(1.0, 1.5), ValidationError);
  }

  TEST_CASE("display rounding is a ceiling that ignores float noise")
  {
    CHECK(display_round(3.0) == 3.0);
    CHECK(display_round(3.0 + 1e-13) == 3.0);
    CHECK(display_round(3.001) == 4.0);
    CHECK(display_round(0.2) == 1.0);
    CHECK(display_round(0.0) == 0.0);
  }

  TEST_CASE("scenario sums from the bundled catalog")
  {
    auto cat = demo_catalog();
    CHECK(shown(cat, Basis::real, { "ladder", "lifting/pulling/handling", "light vehicle", "improper body position" }) ==
          74.0);
    CHECK(shown(cat, Basis::worst, { "ladder", "lifting/pulling/handling", "light vehicle", "improper body position" }) ==
          620.0);
    CHECK(shown(cat, Basis::real, { "hazardous substance", "confined workspace" }) == 705.0);
    CHECK(shown(cat, Basis::real, { "hammer", "lumber" }) == 58.0);
    CHECK(shown(cat, Basis::real, { "hand size pieces" }) == 7.0);
  }

  TEST_CASE("situation risk errors")
  {
    auto rr = catalog_relative_risks(demo_catalog(), Basis::real);
    CHECK_THROWS_AS(situation_risk(rr, {}), ValidationError);
    try {
      situation_risk(rr, names({ "ladder", "teleporter", "unicorn" }));
      FAIL("expected an error");
    } catch (const ValidationError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("teleporter") != std::string::npos);
      CHECK(msg.find("unicorn") != std::string::npos);
    }
  }

  TEST_CASE("escalation delta ranking")
  {
    auto deltas = escalation_deltas(demo_catalog());
    REQUIRE(deltas.size() == 77);
    CHECK(deltas[0].name == "hazardous substance");
    CHECK(deltas[1].name == "machinery");
    CHECK(std::abs(deltas[0].delta - 6059) <= 1.0);
    CHECK(std::abs(deltas[1].delta - 3092) <= 1.0);
    for (std::size_t i = 1; i < deltas.size(); ++i) {
      CHECK(deltas[i - 1].delta >= deltas[i].delta);
      if (deltas[i - 1].delta == deltas[i].delta)
        CHECK(deltas[i - 1].name < deltas[i].name);
    }
  }

  TEST_CASE("equal real and worst counts give zero deltas, ties by name")
  {
    std::vector<AttributeRecord> recs;
    for (const char* n : { "b", "c", "a" }) {
      AttributeRecord r;
      r.name = n;
      r.report_count = 2;
      r.exposure = 0.5;
      r.real = { 1, 1, 0, 0, 0 };
      r.worst = r.real;
      recs.push_back(r);
    }
    auto d = escalation_deltas(AttributeCatalog(recs));
    for (const auto& e : d)
      CHECK(e.delta == 0.0);
    CHECK(d[0].name == "a");
    CHECK(d[1].name == "b");
    CHECK(d[2].name == "c");
  }

  TEST_CASE("report risk is the row dot product")
  {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> bit(0, 1);
    std::uniform_int_distribution<std::uint32_t> cnt(0, 4);
    std::uniform_real_distribution<double> expo(0.01, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<AttributeRecord> recs;
      std::vector<std::string> cols;
      for (int p = 0; p < 10; ++p) {
        AttributeRecord r;
        r.name = "a" + std::to_string(p);
        for (auto& c : r.real)
          c = cnt(rng);
        r.report_count = 0;
        for (auto c : r.real)
          r.report_count += c;
        if (r.report_count == 0) {
          r.real[0] = 1;
          r.report_count = 1;
        }
        r.worst = r.real;
        r.exposure = expo(rng);
        recs.push_back(r);
        cols.push_back(r.name);
      }
      AttributeCatalog cat(recs);
      std::vector<std::uint8_t> cells;
      for (int r = 0; r < 10; ++r) {
        std::vector<std::uint8_t> row(10);
        for (auto& c : row)
          c = static_cast<std::uint8_t>(bit(rng));
        row[r] = 1;
        cells.insert(cells.end(), row.begin(), row.end());
      }
      ReportMatrix m(cols, cells);
      auto rr = catalog_relative_risks(cat, Basis::real);
      auto risks = report_risks(m, rr);
      for (std::size_t r = 0; r < m.rows(); ++r) {
        double s = 0;
        for (std::size_t p = 0; p < m.cols(); ++p) {
          const auto& rec = cat[p];
          double total = 0;
          for (std::size_t k = 0; k < 5; ++k)
            total += rec.real[k] * SeverityScale{}[k];
          s += m.at(r, p) * (total / rec.exposure);
        }
        CHECK(risks.values[r] == doctest::Approx(s).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("report columns are matched by name, not position")
  {
    auto cat = parse_catalog_text(testutil::kSmallCatalog, SeverityScale{});
    auto rr = catalog_relative_risks(cat, Basis::real);
    auto m = parse_report_matrix_text("crane,ladder\n1,0\n0,1\n", cat);
    auto risks = report_risks(m, rr);
    CHECK(risks.values[0] == rr.at("crane"));
    CHECK(risks.values[1] == rr.at("ladder"));
  }

  TEST_CASE("adding an attribute never lowers report risk")
  {
    auto cat = demo_catalog();
    auto rr = catalog_relative_risks(cat, Basis::worst);
    std::vector<std::string> attrs{ "ladder" };
    double prev = situation_risk(rr, attrs);
    for (const char* extra : { "lumber", "crane", "wind", "spark" }) {
      attrs.push_back(extra);
      const double now = situation_risk(rr, attrs);
      CHECK(now >= prev);
      prev = now;
    }
  }

  TEST_CASE("scale equivariance and exposure halving")
  {
    auto cat = parse_catalog_text(testutil::kSmallCatalog, SeverityScale{});
    const double c = 3.5;
    AttributeCatalog scaled({ cat.records().begin(), cat.records().end() }, SeverityScale{}.scaled(c));
    auto a = catalog_relative_risks(cat, Basis::worst);
    auto b = catalog_relative_risks(scaled, Basis::worst);
    for (std::size_t i = 0; i < a.size(); ++i)
      CHECK(b.values[i] == doctest::Approx(c * a.values[i]).epsilon(1e-14));

    auto da = escalation_deltas(cat);
    auto db = escalation_deltas(scaled);
    for (std::size_t i = 0; i < da.size(); ++i)
      CHECK(da[i].name == db[i].name);

    CHECK(attribute_relative_risk(100.0, 0.25) == 2.0 * attribute_relative_risk(100.0, 0.5));
  }

  TEST_CASE("csv exports")
  {
    auto cat = demo_catalog();
    auto text = relative_risks_csv(cat);
    CHECK(text.rfind("name,rr_real,rr_worst,delta\n", 0) == 0);
    CHECK(text.find("\nlumber,53,") != std::string::npos);

    RiskSample real{ Basis::real, { 1.5, 2.0 } };
    RiskSample worst{ Basis::worst, { 3.0, 4.25 } };
    CHECK(report_risks_csv(real, worst) == "report_index,risk_real,risk_worst\n0,1.5,3\n1,2,4.25\n");
  }
}
