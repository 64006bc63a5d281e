#include <gtest/gtest.h>

#include <functional>
#include <set>

#include "roadweights/errors.hpp"
#include "roadweights/graph.hpp"
#include "support.hpp"

using namespace roadweights;
using rwtest::edge;

namespace {

RoadGraph line_graph(std::size_t edges, TagSchedule schedule) {
  std::vector<EdgeSpec> specs;
  for (std::size_t i = 0; i < edges; ++i)
    specs.push_back(edge("e" + std::to_string(i), "v" + std::to_string(i),
                         "v" + std::to_string(i + 1)));
  return RoadGraph(specs, std::move(schedule));
}

TagSchedule two_tags() {
  return TagSchedule({"OFFPEAK", "PEAK"},
                     {{DayClass::kWeekday, 0, 420, 0},
                      {DayClass::kWeekday, 420, 540, 1},
                      {DayClass::kWeekday, 540, 1440, 0},
                      {DayClass::kWeekend, 0, 1440, 0}});
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIo;
}

}  // namespace

TEST(FlatIndex, LayoutExamples) {
  const RoadGraph g = line_graph(4, two_tags());
  // The examples are one-based (edge, tag) -> position; the API is zero-based.
  EXPECT_EQ(g.flat_index(0, 0) + 1, 1u);
  EXPECT_EQ(g.flat_index(3, 1) + 1, 8u);
  EXPECT_EQ(g.flat_index(2, 1) + 1, 7u);
}

TEST(FlatIndex, OutOfRangeThrowsIndexError) {
  const RoadGraph g = line_graph(4, two_tags());
  EXPECT_EQ(code_of([&] { (void)g.flat_index(4, 0); }), ErrorCode::kIndex);
  EXPECT_EQ(code_of([&] { (void)g.flat_index(0, 2); }), ErrorCode::kIndex);
}

TEST(FlatIndex, IsABijection) {
  for (std::size_t e = 1; e <= 7; ++e) {
    const RoadGraph g = line_graph(e, TagSchedule::commuter());
    std::set<std::size_t> seen;
    for (std::size_t i = 0; i < e; ++i)
      for (std::size_t k = 0; k < 3; ++k) seen.insert(g.flat_index(i, k));
    ASSERT_EQ(seen.size(), g.cost_dimension());
    EXPECT_EQ(*seen.begin(), 0u);
    EXPECT_EQ(*seen.rbegin(), g.cost_dimension() - 1);
  }
}

TEST(TagSchedule, CommuterExamples) {
  const auto s = TagSchedule::commuter();
  EXPECT_EQ(s.tag_name(s.tag_of(DayClass::kWeekday, 7 * 60 + 30)), "PEAK");
  EXPECT_EQ(s.tag_name(s.tag_of(DayClass::kWeekday, 12 * 60)), "OFFPEAK");
  EXPECT_EQ(s.tag_name(s.tag_of(DayClass::kWeekend, 23 * 60 + 59)), "WEEKENDS");
}

TEST(TagSchedule, TotalOverEveryMinute) {
  const auto s = TagSchedule::commuter();
  for (DayClass day : {DayClass::kWeekday, DayClass::kWeekend})
    for (int m = 0; m < kMinutesPerDay; ++m) {
      int matches = 0;
      for (const auto& r : s.rules())
        if (r.day == day && r.start_minute <= m && m < r.end_minute) ++matches;
      ASSERT_EQ(matches, 1) << "minute " << m;
      EXPECT_EQ(s.tag_of(day, m), rwtest::commuter_tag(day, m));
    }
}

TEST(TagSchedule, EndOfDayBelongsToLastInterval) {
  const auto s = TagSchedule::commuter();
  EXPECT_EQ(s.tag_of(DayClass::kWeekday, 1440), 0u);
}

TEST(TagSchedule, RejectsGapsAndOverlaps) {
  const std::vector<std::string> tags = {"X", "Y"};
  const TagRule weekend{DayClass::kWeekend, 0, 1440, 0};
  auto gap = [&] {
    TagSchedule(tags, {{DayClass::kWeekday, 0, 600, 0},
                       {DayClass::kWeekday, 601, 1440, 1}, weekend});
  };
  auto overlap = [&] {
    TagSchedule(tags, {{DayClass::kWeekday, 0, 700, 0},
                       {DayClass::kWeekday, 600, 1440, 1}, weekend});
  };
  auto missing_day = [&] { TagSchedule(tags, {{DayClass::kWeekday, 0, 1440, 0}}); };
  auto bad_tag = [&] {
    TagSchedule(tags, {{DayClass::kWeekday, 0, 1440, 5}, weekend});
  };
  EXPECT_EQ(code_of(gap), ErrorCode::kScheduleNotPartition);
  EXPECT_EQ(code_of(overlap), ErrorCode::kScheduleNotPartition);
  EXPECT_EQ(code_of(missing_day), ErrorCode::kScheduleNotPartition);
  EXPECT_EQ(code_of(bad_tag), ErrorCode::kScheduleNotPartition);
}

TEST(TagSchedule, OverlapByTag) {
  const auto s = TagSchedule::commuter();
  const auto o = s.overlap_by_tag(DayClass::kWeekday, 410, 425);
  EXPECT_DOUBLE_EQ(o[0], 10.0);
  EXPECT_DOUBLE_EQ(o[1], 5.0);
  EXPECT_DOUBLE_EQ(o[2], 0.0);
  EXPECT_EQ(s.intervals_of(1).size(), 2u);
}

TEST(RoadGraph, VerticesNumberedByFirstAppearance) {
  const RoadGraph g = rwtest::fig3_graph();
  EXPECT_EQ(g.num_vertices(), 4u);
  EXPECT_EQ(g.num_edges(), 5u);
  EXPECT_EQ(g.vertex_id(0), "A");
  EXPECT_EQ(g.vertex_id(1), "B");
  EXPECT_EQ(g.vertex_id(2), "C");
  EXPECT_EQ(g.vertex_id(3), "D");
  EXPECT_EQ(*g.find_edge("BD"), 4u);
  EXPECT_FALSE(g.find_edge("XY"));
  const auto out_b = g.out_edges(1);
  EXPECT_EQ(std::vector<std::size_t>(out_b.begin(), out_b.end()),
            (std::vector<std::size_t>{1, 2, 4}));
  EXPECT_TRUE(g.out_edges(3).empty());
}

TEST(RoadGraph, RejectsInvalidEdges) {
  const auto s = TagSchedule::commuter();
  EXPECT_ANY_THROW(RoadGraph({edge("a", "x", "x")}, s));
  EXPECT_ANY_THROW(RoadGraph({edge("a", "x", "y", 0.0)}, s));
  EXPECT_ANY_THROW(RoadGraph({edge("a", "x", "y", 10.0, -5.0)}, s));
  EXPECT_ANY_THROW(RoadGraph({edge("a", "x", "y"), edge("a", "y", "x")}, s));
  EXPECT_NO_THROW(RoadGraph({edge("a", "x", "y", 10.0, std::nullopt)}, s));
}

TEST(RoadGraph, EdgeSpecsRoundTrip) {
  const RoadGraph g = rwtest::fig3_graph();
  const RoadGraph h(g.edge_specs(), g.schedule());
  ASSERT_EQ(h.num_edges(), g.num_edges());
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    EXPECT_EQ(h.edge(i).id, g.edge(i).id);
    EXPECT_EQ(h.edge(i).tail, g.edge(i).tail);
    EXPECT_EQ(h.edge(i).head, g.edge(i).head);
  }
}

TEST(CostVector, LayoutMatchesFlatIndex) {
  const RoadGraph g = line_graph(4, two_tags());
  CostVector d(4, 2);
  d(2, 1) = 3.5;
  EXPECT_DOUBLE_EQ(d.values()[static_cast<Eigen::Index>(g.flat_index(2, 1))], 3.5);
  EXPECT_NO_THROW(d.check_matches(g));
  EXPECT_ANY_THROW(CostVector(3, 2).check_matches(g));
}
