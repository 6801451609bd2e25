#include "wardwalk/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wardwalk/election.hpp"
#include "wardwalk/error.hpp"
#include "wardwalk/io.hpp"

namespace wardwalk {

namespace {

using nlohmann::json;

const json& require_field(const json& obj, const char* key, const std::string& who) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw Error(who + ": missing field '" + key + "'");
  }
  return obj.at(key);
}

double attribute_field(const json& obj, const char* key, const std::string& who) {
  const json& value = require_field(obj, key, who);
  if (!value.is_number()) {
    throw Error(who + ": field '" + std::string(key) +
                "' must be a finite nonnegative number");
  }
  const double d = value.get<double>();
  if (!std::isfinite(d) || d < 0.0) {
    throw Error(who + ": field '" + std::string(key) +
                "' must be a finite nonnegative number");
  }
  return d;
}

Ring parse_ring(const json& value, const std::string& who) {
  if (!value.is_array()) {
    throw Error(who + ": ring must be an array of [x,y] points");
  }
  Ring ring;
  ring.reserve(value.size());
  for (const json& pt : value) {
    if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number()) {
      throw Error(who + ": ring must be an array of [x,y] points");
    }
    const double x = pt[0].get<double>();
    const double y = pt[1].get<double>();
    if (!std::isfinite(x) || !std::isfinite(y)) {
      throw Error(who + ": ring coordinates must be finite");
    }
    ring.push_back({x, y});
  }
  if (ring.size() >= 2 && ring.front().x == ring.back().x &&
      ring.front().y == ring.back().y) {
    ring.pop_back();
  }
  if (ring.size() < 3) throw Error(who + ": ring needs at least 3 vertices");
  return ring;
}

struct BBox {
  double x0 = std::numeric_limits<double>::infinity();
  double y0 = std::numeric_limits<double>::infinity();
  double x1 = -std::numeric_limits<double>::infinity();
  double y1 = -std::numeric_limits<double>::infinity();
};

BBox precinct_bbox(const PrecinctGeometry& p) {
  BBox box;
  for (const PolygonPart& part : p.parts) {
    for (const Point& v : part.outer) {
      box.x0 = std::min(box.x0, v.x);
      box.y0 = std::min(box.y0, v.y);
      box.x1 = std::max(box.x1, v.x);
      box.y1 = std::max(box.y1, v.y);
    }
  }
  return box;
}

bool bboxes_touch(const BBox& a, const BBox& b) {
  return a.x0 <= b.x1 + kLengthEpsilon && b.x0 <= a.x1 + kLengthEpsilon &&
         a.y0 <= b.y1 + kLengthEpsilon && b.y0 <= a.y1 + kLengthEpsilon;
}

double centroid_distance_sq(Point a, Point b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

std::vector<Point> precinct_centroids(std::span<const PrecinctGeometry> precincts) {
  std::vector<Point> centroids;
  centroids.reserve(precincts.size());
  for (const PrecinctGeometry& p : precincts) {
    centroids.push_back(parts_centroid(p.parts));
  }
  return centroids;
}

std::vector<std::size_t> ids_sorted(std::span<const PrecinctGeometry> precincts) {
  std::vector<std::size_t> order(precincts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return precincts[a].id < precincts[b].id;
  });
  return order;
}

// Allocates total proportionally to areas with one slot taking the remainder,
// then nudges that slot until the shares sum back to total exactly.
std::vector<double> allocate_proportional(double total, std::span<const double> areas,
                                          const std::string& id) {
  const std::size_t k = areas.size();
  const double area_total = std::accumulate(areas.begin(), areas.end(), 0.0);
  std::vector<double> shares(k, 0.0);

  const auto fill = [&](std::size_t remainder_slot) {
    double allocated = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      if (i == remainder_slot) continue;
      shares[i] = total * (areas[i] / area_total);
      allocated += shares[i];
    }
    shares[remainder_slot] = total - allocated;
  };
  const auto residual = [&]() {
    std::vector<double> probe(shares.begin(), shares.end());
    probe.push_back(-total);
    return exact_sum(probe);
  };
  const auto settle = [&](std::size_t slot) {
    for (int iter = 0; iter < 64; ++iter) {
      const double r = residual();
      if (r == 0.0) return true;
      shares[slot] -= r;
    }
    return residual() == 0.0;
  };

  fill(k - 1);
  if (settle(k - 1)) return shares;

  const std::size_t largest = static_cast<std::size_t>(
      std::max_element(areas.begin(), areas.end()) - areas.begin());
  fill(largest);
  if (settle(largest)) return shares;
  throw Error("precinct '" + id + "': could not split attributes exactly");
}

std::vector<DistrictTotals> district_totals(std::span<const PrecinctGeometry> precincts,
                                            int num_districts) {
  const std::size_t d = static_cast<std::size_t>(num_districts);
  std::vector<std::vector<double>> pops(d), reps(d), dems(d);
  for (const PrecinctGeometry& p : precincts) {
    const std::size_t k = static_cast<std::size_t>(p.district);
    pops[k].push_back(p.population);
    reps[k].push_back(p.rep_votes);
    dems[k].push_back(p.dem_votes);
  }
  std::vector<DistrictTotals> totals(d);
  for (std::size_t k = 0; k < d; ++k) {
    totals[k].population = exact_sum(pops[k]);
    totals[k].rep_votes = exact_sum(reps[k]);
    totals[k].dem_votes = exact_sum(dems[k]);
  }
  return totals;
}

double totals_efficiency_gap(std::span<const DistrictTotals> totals) {
  std::vector<DistrictTally> tallies;
  tallies.reserve(totals.size());
  for (const DistrictTotals& t : totals) {
    tallies.push_back({t.rep_votes, t.dem_votes});
  }
  return efficiency_gap_from_tallies(tallies);
}

}  // namespace

GeometryInput parse_geometry_json(std::string_view text) {
  const json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw Error("geometry input is not valid JSON");
  if (!doc.is_object() || !doc.contains("precincts") || !doc["precincts"].is_array()) {
    throw Error("geometry input: missing 'precincts' array");
  }
  const json& list = doc["precincts"];
  if (list.empty()) throw Error("geometry input: 'precincts' must not be empty");

  GeometryInput input;
  std::set<std::string> seen_ids;
  int max_district = -1;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const json& entry = list[i];
    std::string who = "precinct at index " + std::to_string(i);

    const json& id_field = require_field(entry, "id", who);
    if (!id_field.is_string() || id_field.get<std::string>().empty()) {
      throw Error(who + ": 'id' must be a nonempty string");
    }
    PrecinctGeometry p;
    p.id = id_field.get<std::string>();
    who = "precinct '" + p.id + "'";
    if (p.id.find('#') != std::string::npos) {
      throw Error(who + ": id must not contain '#'");
    }
    if (!seen_ids.insert(p.id).second) throw Error(who + ": duplicate id");

    const json& county = require_field(entry, "county", who);
    if (!county.is_string()) throw Error(who + ": field 'county' must be a string");
    p.county = county.get<std::string>();
    if (p.county.find_first_of(",\r\n") != std::string::npos) {
      throw Error(who + ": field 'county' must not contain commas or newlines");
    }

    const json& district = require_field(entry, "district", who);
    if (!district.is_number_integer() || district.get<int>() < 0) {
      throw Error(who + ": field 'district' must be a nonnegative integer");
    }
    p.district = district.get<int>();
    max_district = std::max(max_district, p.district);

    p.population = attribute_field(entry, "population", who);
    p.rep_votes = attribute_field(entry, "rep_votes", who);
    p.dem_votes = attribute_field(entry, "dem_votes", who);

    const json& polygons = require_field(entry, "polygons", who);
    if (!polygons.is_array() || polygons.empty()) {
      throw Error(who + ": 'polygons' must be a nonempty array");
    }
    for (const json& poly : polygons) {
      PolygonPart part;
      part.outer = parse_ring(require_field(poly, "outer", who), who);
      if (poly.is_object() && poly.contains("holes")) {
        if (!poly["holes"].is_array()) {
          throw Error(who + ": 'holes' must be an array of rings");
        }
        for (const json& hole : poly["holes"]) {
          part.holes.push_back(parse_ring(hole, who));
        }
      }
      if (!(part_area(part) > 0.0)) {
        throw Error(who + ": polygon part with nonpositive area");
      }
      p.parts.push_back(std::move(part));
    }
    input.precincts.push_back(std::move(p));
  }

  input.num_districts = max_district + 1;
  std::vector<bool> populated(static_cast<std::size_t>(input.num_districts), false);
  for (const PrecinctGeometry& p : input.precincts) {
    populated[static_cast<std::size_t>(p.district)] = true;
  }
  for (std::size_t d = 0; d < populated.size(); ++d) {
    if (!populated[d]) {
      throw Error("district " + std::to_string(d) + " has no precincts");
    }
  }

  if (doc.contains("frozen_districts")) {
    const json& frozen = doc["frozen_districts"];
    if (!frozen.is_array()) {
      throw Error("geometry input: 'frozen_districts' must be an array");
    }
    std::set<int> unique;
    for (const json& entry : frozen) {
      if (!entry.is_number_integer() || entry.get<int>() < 0 ||
          entry.get<int>() >= input.num_districts) {
        throw Error("frozen district " + entry.dump() + " is out of range");
      }
      unique.insert(entry.get<int>());
    }
    input.frozen_districts.assign(unique.begin(), unique.end());
  }
  return input;
}

std::vector<bool> detect_islands(std::span<const PrecinctGeometry> precincts) {
  const std::size_t n = precincts.size();
  std::vector<bool> island(n, false);
  if (n <= 1) return island;

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  const auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };

  std::vector<BBox> boxes;
  boxes.reserve(n);
  for (const PrecinctGeometry& p : precincts) boxes.push_back(precinct_bbox(p));

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (find(i) == find(j)) continue;
      if (!bboxes_touch(boxes[i], boxes[j])) continue;
      if (shared_boundary_length(std::span<const PolygonPart>(precincts[i].parts),
                                 std::span<const PolygonPart>(precincts[j].parts)) >
          kLengthEpsilon) {
        parent[find(i)] = find(j);
      }
    }
  }

  std::vector<double> component_area(n, 0.0);
  std::vector<const std::string*> component_min_id(n, nullptr);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = find(i);
    component_area[root] += parts_area(precincts[i].parts);
    if (component_min_id[root] == nullptr || precincts[i].id < *component_min_id[root]) {
      component_min_id[root] = &precincts[i].id;
    }
  }

  std::size_t mainland = find(0);
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t root = find(i);
    if (root == mainland) continue;
    if (component_area[root] > component_area[mainland] ||
        (component_area[root] == component_area[mainland] &&
         *component_min_id[root] < *component_min_id[mainland])) {
      mainland = root;
    }
  }

  for (std::size_t i = 0; i < n; ++i) island[i] = find(i) != mainland;
  return island;
}

std::vector<PrecinctGeometry> merge_islands(std::vector<PrecinctGeometry> precincts) {
  const std::size_t n = precincts.size();
  if (n <= 1) return precincts;
  const std::vector<bool> island = detect_islands(precincts);
  if (std::none_of(island.begin(), island.end(), [](bool b) { return b; })) {
    return precincts;
  }

  const std::vector<Point> centroids = precinct_centroids(precincts);
  for (std::size_t i : ids_sorted(precincts)) {
    if (!island[i]) continue;
    std::size_t best = n;
    double best_d2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (island[j] || precincts[j].district != precincts[i].district) continue;
      const double d2 = centroid_distance_sq(centroids[i], centroids[j]);
      if (best == n || d2 < best_d2 ||
          (d2 == best_d2 && precincts[j].id < precincts[best].id)) {
        best = j;
        best_d2 = d2;
      }
    }
    if (best == n) {
      throw Error("island precinct '" + precincts[i].id +
                  "' has no same-district mainland precinct");
    }
    PrecinctGeometry& target = precincts[best];
    target.population += precincts[i].population;
    target.rep_votes += precincts[i].rep_votes;
    target.dem_votes += precincts[i].dem_votes;
    for (PolygonPart& part : precincts[i].parts) {
      target.parts.push_back(std::move(part));
    }
  }

  std::vector<PrecinctGeometry> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!island[i]) out.push_back(std::move(precincts[i]));
  }
  return out;
}

std::vector<PrecinctGeometry> split_multipolygons(std::vector<PrecinctGeometry> precincts) {
  std::vector<PrecinctGeometry> out;
  out.reserve(precincts.size());
  for (PrecinctGeometry& p : precincts) {
    if (p.parts.size() <= 1) {
      out.push_back(std::move(p));
      continue;
    }
    std::vector<double> areas;
    areas.reserve(p.parts.size());
    for (const PolygonPart& part : p.parts) {
      const double a = part_area(part);
      if (!(a > 0.0)) {
        throw Error("precinct '" + p.id + "': zero-area polygon part");
      }
      areas.push_back(a);
    }
    const std::vector<double> pops = allocate_proportional(p.population, areas, p.id);
    const std::vector<double> reps = allocate_proportional(p.rep_votes, areas, p.id);
    const std::vector<double> dems = allocate_proportional(p.dem_votes, areas, p.id);
    for (std::size_t k = 0; k < p.parts.size(); ++k) {
      PrecinctGeometry piece;
      piece.id = p.id + "#" + std::to_string(k);
      piece.county = p.county;
      piece.district = p.district;
      piece.population = pops[k];
      piece.rep_votes = reps[k];
      piece.dem_votes = dems[k];
      piece.parts.push_back(std::move(p.parts[k]));
      out.push_back(std::move(piece));
    }
  }
  return out;
}

std::vector<PrecinctGeometry> dissolve_contained(std::vector<PrecinctGeometry> precincts) {
  const std::size_t n = precincts.size();
  if (n <= 1) return precincts;

  std::vector<bool> contained(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      if (parts_contain(std::span<const PolygonPart>(precincts[j].parts),
                        std::span<const PolygonPart>(precincts[i].parts))) {
        contained[i] = true;
        break;
      }
    }
  }
  if (std::none_of(contained.begin(), contained.end(), [](bool b) { return b; })) {
    return precincts;
  }

  const std::vector<Point> centroids = precinct_centroids(precincts);
  for (std::size_t i : ids_sorted(precincts)) {
    if (!contained[i]) continue;
    std::size_t best = n;
    double best_d2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (contained[j] || precincts[j].district != precincts[i].district) continue;
      const double d2 = centroid_distance_sq(centroids[i], centroids[j]);
      if (best == n || d2 < best_d2 ||
          (d2 == best_d2 && precincts[j].id < precincts[best].id)) {
        best = j;
        best_d2 = d2;
      }
    }
    if (best == n) {
      throw Error("contained precinct '" + precincts[i].id +
                  "' has no same-district survivor");
    }
    PrecinctGeometry& target = precincts[best];
    target.population += precincts[i].population;
    target.rep_votes += precincts[i].rep_votes;
    target.dem_votes += precincts[i].dem_votes;
  }

  std::vector<PrecinctGeometry> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!contained[i]) out.push_back(std::move(precincts[i]));
  }
  return out;
}

std::pair<std::vector<WardNode>, std::vector<EdgeRecord>> extract_graph(
    std::span<const PrecinctGeometry> precincts,
    std::span<const int> frozen_districts, int num_districts) {
  const std::size_t n = precincts.size();
  const std::vector<std::size_t> order = ids_sorted(precincts);
  const std::set<int> frozen(frozen_districts.begin(), frozen_districts.end());

  std::vector<BBox> boxes(n);
  std::vector<double> boundary_total(n, 0.0);
  std::vector<double> shared_total(n, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    const PrecinctGeometry& p = precincts[order[r]];
    boxes[r] = precinct_bbox(p);
    for (const PolygonPart& part : p.parts) {
      boundary_total[r] += part_boundary_length(part);
    }
  }

  std::vector<EdgeRecord> edges;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (!bboxes_touch(boxes[a], boxes[b])) continue;
      const double shared = shared_boundary_length(
          std::span<const PolygonPart>(precincts[order[a]].parts),
          std::span<const PolygonPart>(precincts[order[b]].parts));
      if (shared > kLengthEpsilon) {
        edges.push_back({static_cast<int>(a), static_cast<int>(b), shared});
        shared_total[a] += shared;
        shared_total[b] += shared;
      }
    }
  }

  std::vector<WardNode> nodes;
  nodes.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    const PrecinctGeometry& p = precincts[order[r]];
    WardNode node;
    node.id = static_cast<int>(r);
    node.population = p.population;
    node.rep_votes = p.rep_votes;
    node.dem_votes = p.dem_votes;
    node.area = parts_area(p.parts);
    node.outer_boundary = std::max(boundary_total[r] - shared_total[r], 0.0);
    node.county = p.county;
    node.initial_district = p.district;
    node.frozen = frozen.count(p.district) != 0;
    if (!std::isfinite(node.area) || !std::isfinite(node.outer_boundary)) {
      throw Error("non-finite geometry for precinct '" + p.id + "'");
    }
    nodes.push_back(std::move(node));
  }
  (void)num_districts;
  return {std::move(nodes), std::move(edges)};
}

IngestResult run_ingest_pipeline(std::string_view geometry_json) {
  GeometryInput input = parse_geometry_json(geometry_json);
  IngestResult result;
  result.num_districts = input.num_districts;

  IngestReport& report = result.report;
  report.num_districts = input.num_districts;
  report.initial_count = static_cast<int>(input.precincts.size());
  report.district_before = district_totals(input.precincts, input.num_districts);
  report.eg_before = totals_efficiency_gap(report.district_before);

  std::vector<PrecinctGeometry> current = merge_islands(std::move(input.precincts));
  report.after_merge = static_cast<int>(current.size());
  report.islands_merged = report.initial_count - report.after_merge;

  current = split_multipolygons(std::move(current));
  report.after_split = static_cast<int>(current.size());
  report.parts_added = report.after_split - report.after_merge;

  current = dissolve_contained(std::move(current));
  report.after_dissolve = static_cast<int>(current.size());
  report.contained_dissolved = report.after_split - report.after_dissolve;

  report.district_after = district_totals(current, input.num_districts);
  report.eg_after = totals_efficiency_gap(report.district_after);

  report.conserved = report.eg_before == report.eg_after;
  for (int d = 0; d < input.num_districts; ++d) {
    const DistrictTotals& before = report.district_before[static_cast<std::size_t>(d)];
    const DistrictTotals& after = report.district_after[static_cast<std::size_t>(d)];
    if (before.population != after.population || before.rep_votes != after.rep_votes ||
        before.dem_votes != after.dem_votes) {
      report.conserved = false;
    }
  }

  auto [nodes, edges] =
      extract_graph(current, input.frozen_districts, input.num_districts);
  result.nodes = std::move(nodes);
  result.edges = std::move(edges);
  result.precincts = std::move(current);
  return result;
}

std::string ingest_report_to_json(const IngestReport& report) {
  json j;
  j["conserved"] = report.conserved;
  j["counts"] = {{"initial", report.initial_count},
                 {"after_merge", report.after_merge},
                 {"after_split", report.after_split},
                 {"after_dissolve", report.after_dissolve}};
  j["deltas"] = {{"islands_merged", report.islands_merged},
                 {"parts_added", report.parts_added},
                 {"contained_dissolved", report.contained_dissolved}};
  json districts = json::array();
  for (std::size_t d = 0; d < report.district_before.size(); ++d) {
    const DistrictTotals& before = report.district_before[d];
    const DistrictTotals& after = report.district_after[d];
    districts.push_back({{"population_before", before.population},
                         {"population_after", after.population},
                         {"rep_before", before.rep_votes},
                         {"rep_after", after.rep_votes},
                         {"dem_before", before.dem_votes},
                         {"dem_after", after.dem_votes}});
  }
  j["districts"] = districts;
  j["efficiency_gap"] = {{"before", report.eg_before}, {"after", report.eg_after}};
  j["num_districts"] = report.num_districts;
  return j.dump(2) + "\n";
}

}  // namespace wardwalk
