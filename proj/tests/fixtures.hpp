#pragma once

#include <string>
#include <vector>

#include "hinmhp/cohort.hpp"
#include "hinmhp/hin.hpp"

namespace hinmhp::testing {

/// Cohort with `n` individuals whose scores vary with the row index, so
/// binning produces every bin level on every component.
inline CohortTable ramp_cohort(int n) {
  CohortTable t;
  for (int i = 0; i < n; ++i) {
    Individual r;
    r.id = "u" + std::to_string(i);
    for (int c = 0; c < 5; ++c) r.personality[c] = ((i * (c + 3)) % n) + 0.5 * c;
    r.social = {i % 2, i % 5, i % 4, i % 3};
    r.sleep_quality = (i * 7) % n;
    r.avg_sleep_minutes = 400 + (i * 11) % n;
    r.avg_steps = 5000 + 37.0 * ((i * 13) % n);
    for (int c = 0; c < 5; ++c) r.wellbeing[c] = ((i * (c + 2)) % n) - 0.25 * c;
    r.cesd = i % 4 == 0 ? 20 : 5;
    r.stai = i % 3 == 0 ? 45 : 30;
    r.sms_total = i * 3;
    t.rows.push_back(r);
  }
  return t;
}

/// Three individuals in an SMS triangle with weights 5 (0-1), 2 (0-2), 1 (1-2).
inline Hin triangle_hin() {
  Hin::Labels labels;
  labels[to_index(NodeKind::Individual)] = {"a", "b", "c"};
  labels[to_index(NodeKind::PersonalityTraits)] = {"p0", "p1"};
  labels[to_index(NodeKind::SocialStatus)] = {"s0"};
  labels[to_index(NodeKind::PhysicalHealth)] = {"f0"};
  labels[to_index(NodeKind::WellBeing)] = {"w0", "w1", "w2"};
  labels[to_index(NodeKind::MentalHealth)] = {"depressed", "non-depressed"};
  Hin::EdgeLists e;
  e[to_index(EdgeKind::II)] = {{0, 1, 5}, {0, 2, 2}, {1, 2, 1}};
  e[to_index(EdgeKind::IP)] = {{0, 0, 1}, {1, 0, 1}, {2, 1, 1}};
  e[to_index(EdgeKind::IS)] = {{0, 0, 1}, {1, 0, 1}, {2, 0, 1}};
  e[to_index(EdgeKind::IF)] = {{0, 0, 1}, {1, 0, 1}, {2, 0, 1}};
  e[to_index(EdgeKind::IW)] = {{0, 0, 1}, {1, 1, 1}, {2, 2, 1}};
  e[to_index(EdgeKind::IM)] = {{0, 0, 1}, {1, 1, 1}, {2, 1, 1}};
  return Hin(labels, e);
}

}  // namespace hinmhp::testing
