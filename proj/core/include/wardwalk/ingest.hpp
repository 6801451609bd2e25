#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wardwalk/geometry.hpp"
#include "wardwalk/graph.hpp"

namespace wardwalk {

// A precinct as read from the geometry input: free-form string id, one or
// more polygon parts and the attributes that must be conserved end to end.
struct PrecinctGeometry {
  std::string id;
  std::string county;
  int district = 0;
  double population = 0.0;
  double rep_votes = 0.0;
  double dem_votes = 0.0;
  std::vector<PolygonPart> parts;
};

struct GeometryInput {
  std::vector<PrecinctGeometry> precincts;
  int num_districts = 0;
  std::vector<int> frozen_districts;
};

struct DistrictTotals {
  double population = 0.0;
  double rep_votes = 0.0;
  double dem_votes = 0.0;
};

// Per-step counts plus the conservation audit comparing district-level
// attribute sums and the efficiency gap before and after the pipeline.
struct IngestReport {
  int initial_count = 0;
  int after_merge = 0;
  int after_split = 0;
  int after_dissolve = 0;
  int islands_merged = 0;
  int parts_added = 0;
  int contained_dissolved = 0;
  int num_districts = 0;
  std::vector<DistrictTotals> district_before;
  std::vector<DistrictTotals> district_after;
  double eg_before = 0.0;
  double eg_after = 0.0;
  bool conserved = false;
};

// Parses the geometry JSON document: an object with a "precincts" array and
// an optional "frozen_districts" array. Each precinct carries id, county,
// district, population, rep_votes, dem_votes and a "polygons" array of
// {outer, holes} rings; rings may be written open or explicitly closed.
GeometryInput parse_geometry_json(std::string_view text);

// True per precinct iff it lies outside the mainland, the connected
// component (by shared boundary length) with the largest total area.
std::vector<bool> detect_islands(std::span<const PrecinctGeometry> precincts);

// Step 1: merge each island's attributes and polygon parts into its nearest
// same-district mainland precinct (centroid distance, ties to lowest id).
std::vector<PrecinctGeometry> merge_islands(std::vector<PrecinctGeometry> precincts);

// Step 2: one precinct per polygon part, ids suffixed "#k"; attributes are
// allocated proportionally to part area with the last part adjusted so the
// parts sum back to the original value exactly.
std::vector<PrecinctGeometry> split_multipolygons(std::vector<PrecinctGeometry> precincts);

// Step 3: remove precincts wholly contained in another and add their
// attributes to the nearest same-district survivor.
std::vector<PrecinctGeometry> dissolve_contained(std::vector<PrecinctGeometry> precincts);

// Emits the tabular ward map: dense integer ids in sorted string-id order,
// one edge per precinct pair with shared boundary above kLengthEpsilon and
// outer_boundary the remaining unshared length. Does not validate district
// contiguity; that happens when the tables are loaded.
std::pair<std::vector<WardNode>, std::vector<EdgeRecord>> extract_graph(
    std::span<const PrecinctGeometry> precincts,
    std::span<const int> frozen_districts, int num_districts);

struct IngestResult {
  std::vector<PrecinctGeometry> precincts;
  std::vector<WardNode> nodes;
  std::vector<EdgeRecord> edges;
  int num_districts = 0;
  IngestReport report;
};

// Full pipeline: parse, merge, split, dissolve, extract, audit. The report's
// conserved flag records whether every district total and the efficiency gap
// survived bitwise; callers decide whether that is fatal.
IngestResult run_ingest_pipeline(std::string_view geometry_json);

std::string ingest_report_to_json(const IngestReport& report);

}  // namespace wardwalk
