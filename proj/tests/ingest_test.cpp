#include "wardwalk/ingest.hpp"

#include <doctest.h>

#include <algorithm>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "wardwalk/constraints.hpp"
#include "wardwalk/election.hpp"
#include "wardwalk/error.hpp"
#include "wardwalk/graph.hpp"
#include "wardwalk/io.hpp"
#include "wardwalk/plan.hpp"

using namespace wardwalk;

namespace {

std::string fixture_path(const std::string& name) {
  return std::string(WARDWALK_FIXTURE_DIR) + "/" + name;
}

std::string square_precinct(const std::string& id, const std::string& county,
                            int district, double pop, double rep, double dem,
                            double x0, double y0, double x1, double y1) {
  std::string out = "{\"id\": \"" + id + "\", \"county\": \"" + county +
                    "\", \"district\": " + std::to_string(district);
  out += ", \"population\": " + format_double(pop);
  out += ", \"rep_votes\": " + format_double(rep);
  out += ", \"dem_votes\": " + format_double(dem);
  out += ", \"polygons\": [{\"outer\": [[" + format_double(x0) + "," + format_double(y0) +
         "],[" + format_double(x1) + "," + format_double(y0) + "],[" + format_double(x1) +
         "," + format_double(y1) + "],[" + format_double(x0) + "," + format_double(y1) +
         "]]}]}";
  return out;
}

std::string wrap_precincts(const std::vector<std::string>& entries) {
  std::string out = "{\"precincts\": [";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i > 0) out += ", ";
    out += entries[i];
  }
  out += "]}";
  return out;
}

const PrecinctGeometry& by_id(const std::vector<PrecinctGeometry>& precincts,
                              const std::string& id) {
  const auto it = std::find_if(precincts.begin(), precincts.end(),
                               [&](const PrecinctGeometry& p) { return p.id == id; });
  REQUIRE(it != precincts.end());
  return *it;
}

}  // namespace

TEST_CASE("geometry parsing reads attributes, rings and frozen districts") {
  const std::string text = R"({
    "precincts": [
      {"id": "a", "county": "west", "district": 0,
       "population": 10.5, "rep_votes": 6, "dem_votes": 4,
       "polygons": [{"outer": [[0,0],[1,0],[1,1],[0,1]],
                     "holes": [[[0.25,0.25],[0.75,0.25],[0.75,0.75],[0.25,0.75]]]}]},
      {"id": "b", "county": "east", "district": 1,
       "population": 20, "rep_votes": 3, "dem_votes": 7,
       "polygons": [{"outer": [[1,0],[2,0],[2,1],[1,1],[1,0]]}]}
    ],
    "frozen_districts": [1, 1, 0]
  })";
  const GeometryInput input = parse_geometry_json(text);

  REQUIRE(input.precincts.size() == 2);
  CHECK(input.num_districts == 2);
  CHECK(input.frozen_districts == std::vector<int>{0, 1});

  const PrecinctGeometry& a = input.precincts[0];
  CHECK(a.id == "a");
  CHECK(a.county == "west");
  CHECK(a.district == 0);
  CHECK(a.population == 10.5);
  CHECK(a.rep_votes == 6.0);
  CHECK(a.dem_votes == 4.0);
  REQUIRE(a.parts.size() == 1);
  CHECK(a.parts[0].outer.size() == 4);
  REQUIRE(a.parts[0].holes.size() == 1);
  CHECK(part_area(a.parts[0]) == 0.75);

  const PrecinctGeometry& b = input.precincts[1];
  CHECK(b.parts[0].outer.size() == 4);
  CHECK(part_area(b.parts[0]) == 1.0);
}

TEST_CASE("geometry parsing rejects malformed input") {
  const auto one = [](const std::string& body) {
    return "{\"precincts\": [" + body + "]}";
  };
  const std::string good =
      square_precinct("a", "west", 0, 10, 6, 4, 0, 0, 1, 1);

  SUBCASE("not JSON") {
    CHECK_THROWS_WITH_AS(parse_geometry_json("not json at all"),
                         "geometry input is not valid JSON", Error);
  }
  SUBCASE("missing precincts") {
    CHECK_THROWS_WITH_AS(parse_geometry_json("{\"wards\": []}"),
                         "geometry input: missing 'precincts' array", Error);
  }
  SUBCASE("empty precincts") {
    CHECK_THROWS_WITH_AS(parse_geometry_json("{\"precincts\": []}"),
                         "geometry input: 'precincts' must not be empty", Error);
  }
  SUBCASE("missing id") {
    CHECK_THROWS_WITH_AS(parse_geometry_json(one("{\"county\": \"w\"}")),
                         "precinct at index 0: missing field 'id'", Error);
  }
  SUBCASE("empty id") {
    CHECK_THROWS_WITH_AS(parse_geometry_json(one("{\"id\": \"\"}")),
                         "precinct at index 0: 'id' must be a nonempty string", Error);
  }
  SUBCASE("reserved split marker in id") {
    std::string entry = square_precinct("a#1", "w", 0, 1, 1, 1, 0, 0, 1, 1);
    CHECK_THROWS_WITH_AS(parse_geometry_json(one(entry)),
                         "precinct 'a#1': id must not contain '#'", Error);
  }
  SUBCASE("duplicate id") {
    CHECK_THROWS_WITH_AS(parse_geometry_json(wrap_precincts({good, good})),
                         "precinct 'a': duplicate id", Error);
  }
  SUBCASE("county with comma") {
    std::string entry = square_precinct("a", "w,x", 0, 1, 1, 1, 0, 0, 1, 1);
    CHECK_THROWS_WITH_AS(
        parse_geometry_json(one(entry)),
        "precinct 'a': field 'county' must not contain commas or newlines", Error);
  }
  SUBCASE("negative district") {
    std::string entry = square_precinct("a", "w", -1, 1, 1, 1, 0, 0, 1, 1);
    CHECK_THROWS_WITH_AS(parse_geometry_json(one(entry)),
                         "precinct 'a': field 'district' must be a nonnegative integer",
                         Error);
  }
  SUBCASE("fractional district") {
    std::string entry = good;
    const auto pos = entry.find("\"district\": 0");
    entry.replace(pos, std::string("\"district\": 0").size(), "\"district\": 0.5");
    CHECK_THROWS_WITH_AS(parse_geometry_json(one(entry)),
                         "precinct 'a': field 'district' must be a nonnegative integer",
                         Error);
  }
  SUBCASE("negative population") {
    std::string entry = square_precinct("a", "w", 0, -3, 1, 1, 0, 0, 1, 1);
    CHECK_THROWS_WITH_AS(
        parse_geometry_json(one(entry)),
        "precinct 'a': field 'population' must be a finite nonnegative number", Error);
  }
  SUBCASE("missing votes") {
    CHECK_THROWS_WITH_AS(
        parse_geometry_json(one(
            "{\"id\": \"a\", \"county\": \"w\", \"district\": 0, \"population\": 1}")),
        "precinct 'a': missing field 'rep_votes'", Error);
  }
  SUBCASE("empty polygons") {
    CHECK_THROWS_WITH_AS(
        parse_geometry_json(one(
            "{\"id\": \"a\", \"county\": \"w\", \"district\": 0, \"population\": 1, "
            "\"rep_votes\": 1, \"dem_votes\": 1, \"polygons\": []}")),
        "precinct 'a': 'polygons' must be a nonempty array", Error);
  }
  SUBCASE("short ring") {
    CHECK_THROWS_WITH_AS(
        parse_geometry_json(one(
            "{\"id\": \"a\", \"county\": \"w\", \"district\": 0, \"population\": 1, "
            "\"rep_votes\": 1, \"dem_votes\": 1, "
            "\"polygons\": [{\"outer\": [[0,0],[1,0],[0,0]]}]}")),
        "precinct 'a': ring needs at least 3 vertices", Error);
  }
  SUBCASE("ring of non-points") {
    CHECK_THROWS_WITH_AS(
        parse_geometry_json(one(
            "{\"id\": \"a\", \"county\": \"w\", \"district\": 0, \"population\": 1, "
            "\"rep_votes\": 1, \"dem_votes\": 1, "
            "\"polygons\": [{\"outer\": [1, 2, 3]}]}")),
        "precinct 'a': ring must be an array of [x,y] points", Error);
  }
  SUBCASE("hole swallows the outer ring") {
    CHECK_THROWS_WITH_AS(
        parse_geometry_json(one(
            "{\"id\": \"a\", \"county\": \"w\", \"district\": 0, \"population\": 1, "
            "\"rep_votes\": 1, \"dem_votes\": 1, "
            "\"polygons\": [{\"outer\": [[0,0],[1,0],[1,1],[0,1]], "
            "\"holes\": [[[0,0],[1,0],[1,1],[0,1]]]}]}")),
        "precinct 'a': polygon part with nonpositive area", Error);
  }
  SUBCASE("district numbering with a gap") {
    const std::string a = square_precinct("a", "w", 0, 1, 1, 1, 0, 0, 1, 1);
    const std::string b = square_precinct("b", "w", 2, 1, 1, 1, 1, 0, 2, 1);
    CHECK_THROWS_WITH_AS(parse_geometry_json(wrap_precincts({a, b})),
                         "district 1 has no precincts", Error);
  }
  SUBCASE("frozen district out of range") {
    std::string text = wrap_precincts({good});
    text.insert(text.size() - 1, ", \"frozen_districts\": [3]");
    CHECK_THROWS_WITH_AS(parse_geometry_json(text),
                         "frozen district 3 is out of range", Error);
  }
}

TEST_CASE("island detection marks everything outside the largest component") {
  SUBCASE("far square is an island") {
    const GeometryInput input = parse_geometry_json(wrap_precincts({
        square_precinct("a", "w", 0, 1, 1, 1, 0, 0, 1, 1),
        square_precinct("b", "w", 0, 1, 1, 1, 1, 0, 2, 1),
        square_precinct("far", "w", 0, 1, 1, 1, 9, 9, 10, 10),
    }));
    CHECK(detect_islands(input.precincts) == std::vector<bool>{false, false, true});
  }

  SUBCASE("a hole plug touches its surrounding ring") {
    const std::string donut = fixture_path("rundonut.json");
    const GeometryInput input = parse_geometry_json(read_text_file(donut));
    const std::vector<bool> island = detect_islands(input.precincts);
    CHECK(std::none_of(island.begin(), island.end(), [](bool b) { return b; }));
  }

  SUBCASE("equal-area components fall back to the lowest id") {
    const GeometryInput input = parse_geometry_json(wrap_precincts({
        square_precinct("zz", "w", 0, 1, 1, 1, 0, 0, 1, 1),
        square_precinct("aa", "w", 0, 1, 1, 1, 5, 0, 6, 1),
    }));
    CHECK(detect_islands(input.precincts) == std::vector<bool>{true, false});
  }

  SUBCASE("single precinct is mainland") {
    const GeometryInput input = parse_geometry_json(
        wrap_precincts({square_precinct("solo", "w", 0, 1, 1, 1, 0, 0, 1, 1)}));
    CHECK(detect_islands(input.precincts) == std::vector<bool>{false});
  }
}

TEST_CASE("island merge folds attributes and parts into the nearest same-district target") {
  SUBCASE("nearer of two candidates wins") {
    const GeometryInput input = parse_geometry_json(wrap_precincts({
        square_precinct("a", "w", 0, 10, 4, 6, 0, 0, 1, 1),
        square_precinct("b", "w", 0, 20, 8, 2, 1, 0, 2, 1),
        square_precinct("i", "w", 0, 5, 1, 1, 3.5, 0, 4.5, 1),
    }));
    const auto merged = merge_islands(input.precincts);

    REQUIRE(merged.size() == 2);
    const PrecinctGeometry& target = by_id(merged, "b");
    CHECK(target.population == 25.0);
    CHECK(target.rep_votes == 9.0);
    CHECK(target.dem_votes == 3.0);
    CHECK(target.parts.size() == 2);
    CHECK(by_id(merged, "a").population == 10.0);
  }

  SUBCASE("same-district rule overrides pure distance") {
    const GeometryInput input = parse_geometry_json(wrap_precincts({
        square_precinct("near", "w", 0, 10, 4, 6, 2, 0, 3, 1),
        square_precinct("home", "w", 1, 20, 8, 2, 2, 1, 3, 2),
        square_precinct("i", "w", 1, 5, 1, 1, 4, 0, 5, 1),
    }));
    const auto merged = merge_islands(input.precincts);
    CHECK(by_id(merged, "home").population == 25.0);
    CHECK(by_id(merged, "near").population == 10.0);
  }

  SUBCASE("no islands is an identity transform") {
    const GeometryInput input = parse_geometry_json(wrap_precincts({
        square_precinct("a", "w", 0, 10, 4, 6, 0, 0, 1, 1),
        square_precinct("b", "w", 0, 20, 8, 2, 1, 0, 2, 1),
    }));
    const auto merged = merge_islands(input.precincts);
    REQUIRE(merged.size() == 2);
    CHECK(merged[0].id == "a");
    CHECK(merged[1].id == "b");
    CHECK(merged[0].population == 10.0);
  }

  SUBCASE("island with no same-district mainland is an error") {
    const GeometryInput input = parse_geometry_json(wrap_precincts({
        square_precinct("a", "w", 0, 10, 4, 6, 0, 0, 1, 1),
        square_precinct("b", "w", 0, 20, 8, 2, 1, 0, 2, 1),
        square_precinct("lost", "w", 1, 5, 1, 1, 9, 9, 10, 10),
        square_precinct("anchor", "w", 1, 5, 1, 1, 2, 0, 3, 1),
    }));
    auto precincts = input.precincts;
    precincts.erase(precincts.begin() + 3);
    CHECK_THROWS_WITH_AS(merge_islands(std::move(precincts)),
                         "island precinct 'lost' has no same-district mainland precinct",
                         Error);
  }
}

TEST_CASE("multipolygon split allocates proportionally with an exact remainder") {
  SUBCASE("areas one and three give a quarter and three quarters") {
    const std::string text = R"({
      "precincts": [
        {"id": "x", "county": "w", "district": 0,
         "population": 100, "rep_votes": 40, "dem_votes": 60,
         "polygons": [
           {"outer": [[5,0],[6,0],[6,1],[5,1]]},
           {"outer": [[0,0],[3,0],[3,1],[0,1]]}
         ]},
        {"id": "y", "county": "e", "district": 1,
         "population": 7, "rep_votes": 3, "dem_votes": 4,
         "polygons": [{"outer": [[8,0],[9,0],[9,1],[8,1]]}]}
      ]
    })";
    const GeometryInput input = parse_geometry_json(text);
    const auto split = split_multipolygons(input.precincts);

    REQUIRE(split.size() == 3);
    CHECK(split[0].id == "x#0");
    CHECK(split[1].id == "x#1");
    CHECK(split[2].id == "y");
    CHECK(split[0].population == 25.0);
    CHECK(split[1].population == 75.0);
    CHECK(split[0].rep_votes == 10.0);
    CHECK(split[1].rep_votes == 30.0);
    CHECK(split[0].dem_votes == 15.0);
    CHECK(split[1].dem_votes == 45.0);
    CHECK(split[0].county == "w");
    CHECK(split[1].district == 0);
    CHECK(split[0].parts.size() == 1);
    CHECK(part_area(split[0].parts[0]) == 1.0);
    CHECK(part_area(split[1].parts[0]) == 3.0);
    CHECK(split[2].population == 7.0);
  }

  SUBCASE("awkward fractions still sum back exactly") {
    const std::string text = R"({
      "precincts": [
        {"id": "x", "county": "w", "district": 0,
         "population": 10, "rep_votes": 0.1, "dem_votes": 333.13,
         "polygons": [
           {"outer": [[0,0],[1,0],[1,1],[0,1]]},
           {"outer": [[2,0],[3,0],[3,1],[2,1]]},
           {"outer": [[4,0],[5,0],[5,1],[4,1]]},
           {"outer": [[6,0],[6.7,0],[6.7,1],[6,1]]}
         ]}
      ]
    })";
    const GeometryInput input = parse_geometry_json(text);
    const auto split = split_multipolygons(input.precincts);
    REQUIRE(split.size() == 4);

    std::vector<double> pops, reps, dems;
    for (const PrecinctGeometry& p : split) {
      pops.push_back(p.population);
      reps.push_back(p.rep_votes);
      dems.push_back(p.dem_votes);
    }
    pops.push_back(-10.0);
    reps.push_back(-0.1);
    dems.push_back(-333.13);
    CHECK(exact_sum(pops) == 0.0);
    CHECK(exact_sum(reps) == 0.0);
    CHECK(exact_sum(dems) == 0.0);
  }
}

TEST_CASE("contained precincts dissolve into the nearest same-district survivor") {
  SUBCASE("doughnut plug goes to its annulus") {
    const std::string text = R"({
      "precincts": [
        {"id": "ring", "county": "w", "district": 0,
         "population": 30, "rep_votes": 12, "dem_votes": 18,
         "polygons": [{"outer": [[0,0],[3,0],[3,3],[0,3]],
                       "holes": [[[1,1],[2,1],[2,2],[1,2]]]}]},
        {"id": "plug", "county": "w", "district": 0,
         "population": 5, "rep_votes": 4, "dem_votes": 1,
         "polygons": [{"outer": [[1,1],[2,1],[2,2],[1,2]]}]}
      ]
    })";
    const GeometryInput input = parse_geometry_json(text);
    const auto dissolved = dissolve_contained(input.precincts);

    REQUIRE(dissolved.size() == 1);
    CHECK(dissolved[0].id == "ring");
    CHECK(dissolved[0].population == 35.0);
    CHECK(dissolved[0].rep_votes == 16.0);
    CHECK(dissolved[0].dem_votes == 19.0);
    CHECK(dissolved[0].parts.size() == 1);
  }

  SUBCASE("attributes cross to the same district even when another is nearer") {
    const std::string text = R"({
      "precincts": [
        {"id": "big", "county": "w", "district": 0,
         "population": 100, "rep_votes": 50, "dem_votes": 50,
         "polygons": [{"outer": [[0,0],[4,0],[4,4],[0,4]],
                       "holes": [[[1,1],[2,1],[2,2],[1,2]]]}]},
        {"id": "inner", "county": "w", "district": 1,
         "population": 9, "rep_votes": 2, "dem_votes": 7,
         "polygons": [{"outer": [[1,1],[2,1],[2,2],[1,2]]}]},
        {"id": "east", "county": "e", "district": 1,
         "population": 50, "rep_votes": 20, "dem_votes": 30,
         "polygons": [{"outer": [[4,0],[6,0],[6,4],[4,4]]}]}
      ]
    })";
    const GeometryInput input = parse_geometry_json(text);
    const auto dissolved = dissolve_contained(input.precincts);

    REQUIRE(dissolved.size() == 2);
    CHECK(by_id(dissolved, "big").population == 100.0);
    CHECK(by_id(dissolved, "east").population == 59.0);
    CHECK(by_id(dissolved, "east").rep_votes == 22.0);
  }

  SUBCASE("nested boxes all dissolve into the outermost") {
    const std::string text = R"({
      "precincts": [
        {"id": "outer", "county": "w", "district": 0,
         "population": 10, "rep_votes": 5, "dem_votes": 5,
         "polygons": [{"outer": [[0,0],[8,0],[8,8],[0,8]],
                       "holes": [[[1,1],[4,1],[4,4],[1,4]]]}]},
        {"id": "middle", "county": "w", "district": 0,
         "population": 20, "rep_votes": 8, "dem_votes": 12,
         "polygons": [{"outer": [[1,1],[4,1],[4,4],[1,4]],
                       "holes": [[[2,2],[3,2],[3,3],[2,3]]]}]},
        {"id": "core", "county": "w", "district": 0,
         "population": 30, "rep_votes": 11, "dem_votes": 19,
         "polygons": [{"outer": [[2,2],[3,2],[3,3],[2,3]]}]}
      ]
    })";
    const GeometryInput input = parse_geometry_json(text);
    const auto dissolved = dissolve_contained(input.precincts);

    REQUIRE(dissolved.size() == 1);
    CHECK(dissolved[0].id == "outer");
    CHECK(dissolved[0].population == 60.0);
  }

  SUBCASE("no containment is an identity transform") {
    const GeometryInput input = parse_geometry_json(wrap_precincts({
        square_precinct("a", "w", 0, 10, 4, 6, 0, 0, 1, 1),
        square_precinct("b", "w", 0, 20, 8, 2, 1, 0, 2, 1),
    }));
    const auto dissolved = dissolve_contained(input.precincts);
    REQUIRE(dissolved.size() == 2);
    CHECK(dissolved[0].population == 10.0);
  }

  SUBCASE("contained precinct with no same-district survivor is an error") {
    const std::string text = R"({
      "precincts": [
        {"id": "big", "county": "w", "district": 0,
         "population": 100, "rep_votes": 50, "dem_votes": 50,
         "polygons": [{"outer": [[0,0],[4,0],[4,4],[0,4]],
                       "holes": [[[1,1],[2,1],[2,2],[1,2]]]}]},
        {"id": "inner", "county": "w", "district": 1,
         "population": 9, "rep_votes": 2, "dem_votes": 7,
         "polygons": [{"outer": [[1,1],[2,1],[2,2],[1,2]]}]}
      ]
    })";
    GeometryInput input = parse_geometry_json(text);
    CHECK_THROWS_WITH_AS(dissolve_contained(std::move(input.precincts)),
                         "contained precinct 'inner' has no same-district survivor",
                         Error);
  }
}

TEST_CASE("graph extraction produces rook adjacency with dense sorted ids") {
  SUBCASE("unit square grid") {
    const GeometryInput input = parse_geometry_json(
        read_text_file(fixture_path("plain.json")));
    const auto [nodes, edges] = extract_graph(input.precincts, {}, input.num_districts);

    REQUIRE(nodes.size() == 4);
    REQUIRE(edges.size() == 4);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      CHECK(nodes[i].id == static_cast<int>(i));
      CHECK(nodes[i].area == 1.0);
      CHECK(nodes[i].outer_boundary == 2.0);
      CHECK_FALSE(nodes[i].frozen);
    }
    CHECK(nodes[0].population == 10.0);
    CHECK(nodes[0].county == "west");
    CHECK(nodes[1].initial_district == 1);

    std::vector<std::pair<int, int>> pairs;
    for (const EdgeRecord& e : edges) {
      CHECK(e.shared_length == 1.0);
      pairs.emplace_back(e.u, e.v);
    }
    std::sort(pairs.begin(), pairs.end());
    CHECK(pairs == std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  }

  SUBCASE("corner touch yields no edge") {
    const GeometryInput input = parse_geometry_json(wrap_precincts({
        square_precinct("a", "w", 0, 1, 1, 1, 0, 0, 1, 1),
        square_precinct("b", "w", 1, 1, 1, 1, 1, 1, 2, 2),
    }));
    const auto [nodes, edges] = extract_graph(input.precincts, {}, input.num_districts);
    CHECK(edges.empty());
    CHECK(nodes[0].outer_boundary == 4.0);
    CHECK(nodes[1].outer_boundary == 4.0);
  }

  SUBCASE("frozen districts mark every ward they contain") {
    const GeometryInput input = parse_geometry_json(
        read_text_file(fixture_path("plain.json")));
    const std::vector<int> frozen = {1};
    const auto [nodes, edges] = extract_graph(input.precincts, frozen,
                                              input.num_districts);
    CHECK_FALSE(nodes[0].frozen);
    CHECK(nodes[1].frozen);
    CHECK_FALSE(nodes[2].frozen);
    CHECK(nodes[3].frozen);
  }
}

TEST_CASE("full pipeline counts and conservation on the archipelago fixture") {
  const std::string text = read_text_file(fixture_path("archipelago.json"));
  const IngestResult result = run_ingest_pipeline(text);
  const IngestReport& report = result.report;

  CHECK(report.initial_count == 6);
  CHECK(report.after_merge == 5);
  CHECK(report.after_split == 7);
  CHECK(report.after_dissolve == 6);
  CHECK(report.islands_merged == 1);
  CHECK(report.parts_added == 2);
  CHECK(report.contained_dissolved == 1);
  CHECK(report.after_dissolve ==
        report.initial_count - report.islands_merged + report.parts_added -
            report.contained_dissolved);
  CHECK(report.conserved);

  std::vector<std::string> ids;
  for (const PrecinctGeometry& p : result.precincts) ids.push_back(p.id);
  std::sort(ids.begin(), ids.end());
  CHECK(ids == std::vector<std::string>{"m0", "m1", "m2", "mp#0", "mp#1", "mp#2"});

  CHECK(by_id(result.precincts, "m0").population == 48.0);
  CHECK(by_id(result.precincts, "m0").rep_votes == 32.0);
  CHECK(by_id(result.precincts, "m0").dem_votes == 16.0);
  CHECK(by_id(result.precincts, "mp#0").population == 54.0);
  CHECK(by_id(result.precincts, "mp#1").population == 27.0);
  CHECK(by_id(result.precincts, "mp#2").population == 27.0);
  CHECK(by_id(result.precincts, "mp#2").rep_votes == 10.0);

  REQUIRE(report.district_before.size() == 2);
  CHECK(report.district_before[0].population == 80.0);
  CHECK(report.district_before[1].population == 168.0);
  CHECK(report.district_after[0].population == 80.0);
  CHECK(report.district_after[1].population == 168.0);
  CHECK(report.eg_before == report.eg_after);
  CHECK(report.eg_before == doctest::Approx(-2.0 / 252.0));

  REQUIRE(result.nodes.size() == 6);
  std::vector<std::tuple<int, int, double>> got;
  for (const EdgeRecord& e : result.edges) got.emplace_back(e.u, e.v, e.shared_length);
  std::sort(got.begin(), got.end());
  const std::vector<std::tuple<int, int, double>> want = {
      {0, 1, 2.0}, {0, 2, 2.0}, {1, 2, 2.0}, {1, 3, 2.0}, {2, 4, 1.0}};
  CHECK(got == want);

  CHECK(result.nodes[0].outer_boundary == 8.0);
  CHECK(result.nodes[5].outer_boundary == 4.0);
}

TEST_CASE("full pipeline counts and conservation on the nested fixture") {
  const std::string text = read_text_file(fixture_path("nested.json"));
  const IngestResult result = run_ingest_pipeline(text);
  const IngestReport& report = result.report;

  CHECK(report.initial_count == 6);
  CHECK(report.after_merge == 4);
  CHECK(report.after_split == 7);
  CHECK(report.after_dissolve == 5);
  CHECK(report.islands_merged == 2);
  CHECK(report.parts_added == 3);
  CHECK(report.contained_dissolved == 2);
  CHECK(report.conserved);

  CHECK(by_id(result.precincts, "m#0").population == 600.0);
  CHECK(by_id(result.precincts, "m#0").rep_votes == 246.25);
  CHECK(by_id(result.precincts, "m#0").dem_votes == 195.0);
  CHECK(by_id(result.precincts, "m#1").population == 80.0);
  CHECK(by_id(result.precincts, "n#0").population == 286.5);
  CHECK(by_id(result.precincts, "n#0").rep_votes == 98.0);
  CHECK(by_id(result.precincts, "n#0").dem_votes == 142.5);
  CHECK(by_id(result.precincts, "n#1").population == 43.75);
  CHECK(by_id(result.precincts, "n#2").population == 43.75);

  CHECK(report.district_before[0].population == 680.0);
  CHECK(report.district_after[0].population == 680.0);
  CHECK(report.district_before[1].population == 374.0);
  CHECK(report.district_after[1].population == 374.0);
  CHECK(report.district_before[0].rep_votes == 280.0);
  CHECK(report.district_after[0].rep_votes == 280.0);
  CHECK(report.district_before[1].dem_votes == 186.0);
  CHECK(report.district_after[1].dem_votes == 186.0);
  CHECK(report.eg_before == report.eg_after);
}

TEST_CASE("full pipeline is an identity on the plain fixture") {
  const std::string text = read_text_file(fixture_path("plain.json"));
  const IngestResult result = run_ingest_pipeline(text);
  const IngestReport& report = result.report;

  CHECK(report.initial_count == 4);
  CHECK(report.after_merge == 4);
  CHECK(report.after_split == 4);
  CHECK(report.after_dissolve == 4);
  CHECK(report.islands_merged == 0);
  CHECK(report.parts_added == 0);
  CHECK(report.contained_dissolved == 0);
  CHECK(report.conserved);
}

TEST_CASE("pipeline output is byte-identical across runs") {
  const std::string text = read_text_file(fixture_path("archipelago.json"));
  const IngestResult first = run_ingest_pipeline(text);
  const IngestResult second = run_ingest_pipeline(text);

  CHECK(write_nodes_csv(first.nodes) == write_nodes_csv(second.nodes));
  CHECK(write_edges_csv(first.edges) == write_edges_csv(second.edges));
  CHECK(ingest_report_to_json(first.report) == ingest_report_to_json(second.report));
}

TEST_CASE("ingested doughnut map loads as a valid chain input") {
  const std::string text = read_text_file(fixture_path("rundonut.json"));
  const IngestResult result = run_ingest_pipeline(text);

  CHECK(result.report.conserved);
  REQUIRE(result.nodes.size() == 6);
  CHECK(result.num_districts == 2);

  const DualGraph graph = parse_graph(write_nodes_csv(result.nodes),
                                      write_edges_csv(result.edges),
                                      result.num_districts);
  CHECK(graph.num_wards() == 6);
  CHECK(graph.total_population() == 24.0);

  const Plan plan(graph);
  ValidityConfig cfg;
  cfg.pop_tolerance_wards = 1.5;
  cfg.compactness_budget = 1.2;
  require_seed_valid(plan, cfg);
  CHECK(is_valid_flip(plan, cfg, compactness_score(plan, cfg.compactness_mode), {1, 1}));
}

TEST_CASE("ingest report serializes with stable sorted keys") {
  const std::string text = read_text_file(fixture_path("nested.json"));
  const IngestResult result = run_ingest_pipeline(text);
  const std::string json_text = ingest_report_to_json(result.report);

  const std::vector<std::string> keys = {"\"conserved\"",      "\"counts\"",
                                         "\"deltas\"",         "\"districts\"",
                                         "\"efficiency_gap\"", "\"num_districts\""};
  std::size_t last = 0;
  for (const std::string& key : keys) {
    const std::size_t pos = json_text.find(key);
    REQUIRE(pos != std::string::npos);
    CHECK(pos > last);
    last = pos;
  }
  CHECK(json_text.find("\"initial\": 6") != std::string::npos);
  CHECK(json_text.find("\"islands_merged\": 2") != std::string::npos);
  CHECK(json_text.find("\"population_before\": 680.0") != std::string::npos);
  CHECK(json_text.back() == '\n');
}
