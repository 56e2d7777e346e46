// Copyright 2026 The Stagescore Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stagescore/synth.h"

#include <algorithm>
#include <optional>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "stagescore/rng.h"
#include "stagescore/scene_cast.h"
#include "text.h"

namespace stagescore {
namespace {

constexpr const char* kNamePool[] = {
    "Agnes",   "Bartholomew", "Cecily", "Dorian",  "Edwina",  "Fitzwilliam",
    "Griselda", "Horatio",    "Imogen", "Jasper",  "Lavinia", "Montague"};
constexpr const char* kHonorifics[] = {"Mr. ", "Mrs. ", "Miss ", "Dr. "};

std::string PickName(const std::set<std::string>& names, SeededRng& rng) {
  if (names.empty()) return "Unknown";
  auto it = names.begin();
  std::advance(it, rng.Below(names.size()));
  return *it;
}

void Renumber(StagePlay& play) {
  for (size_t i = 0; i < play.scenes.size(); ++i) {
    play.scenes[i].index = static_cast<int>(i) + 1;
  }
}

struct Site {
  size_t scene;
  size_t quote;
};

template <typename T>
const T& Pick(const std::vector<T>& items, SeededRng& rng) {
  return items[rng.Below(items.size())];
}

bool MisattributeQuote(StagePlay& play, const TaskBundle& bundle,
                       SeededRng& rng) {
  std::vector<Site> sites;
  for (size_t s = 0; s < play.scenes.size(); ++s) {
    const auto& placements = play.scenes[s].placements;
    for (size_t t = 0; t < placements.size(); ++t) {
      const auto ref = bundle.reference_speakers.find(placements[t].quote_id);
      if (ref != bundle.reference_speakers.end() &&
          ref->second == placements[t].speaker) {
        sites.push_back({s, t});
      }
    }
  }
  if (sites.empty()) return false;
  const Site site = Pick(sites, rng);
  Placement& p = play.scenes[site.scene].placements[site.quote];
  std::vector<std::string> others;
  for (const std::string& name : bundle.canonical_names) {
    if (name != p.speaker) others.push_back(name);
  }
  if (others.empty()) return false;
  p.speaker = Pick(others, rng);
  return true;
}

bool UpstagePrimary(StagePlay& play, int k, SeededRng& rng) {
  std::vector<Site> sites;
  for (size_t s = 0; s < play.scenes.size(); ++s) {
    const Scene& scene = play.scenes[s];
    const SceneCast cast = SceneCast::Of(scene);
    const std::vector<int> top = cast.Top(k);
    for (size_t t = 0; t < scene.placements.size(); ++t) {
      const bool primary = std::find(top.begin(), top.end(),
                                     cast.speaker_of[t]) != top.end();
      if (primary && scene.placements[t].position.depth < kBackRow) {
        sites.push_back({s, t});
      }
    }
  }
  if (sites.empty()) return false;
  const Site site = Pick(sites, rng);
  ++play.scenes[site.scene].placements[site.quote].position.depth;
  return true;
}

bool InjectDepthThrash(StagePlay& play, SeededRng& rng) {
  // (scene, local quote indices of one character) with >= 3 turns.
  std::vector<std::pair<size_t, std::vector<size_t>>> runs;
  for (size_t s = 0; s < play.scenes.size(); ++s) {
    const SceneCast cast = SceneCast::Of(play.scenes[s]);
    std::vector<std::vector<size_t>> turns(cast.size());
    for (size_t t = 0; t < cast.speaker_of.size(); ++t) {
      turns[cast.speaker_of[t]].push_back(t);
    }
    for (auto& list : turns) {
      if (list.size() >= 3) runs.emplace_back(s, std::move(list));
    }
  }
  if (runs.empty()) return false;
  const auto& [s, turns] = Pick(runs, rng);
  const size_t middle = 1 + rng.Below(turns.size() - 2);
  auto& placements = play.scenes[s].placements;
  const GridPosition anchor = placements[turns[middle - 1]].position;
  GridPosition shifted = anchor;
  shifted.depth += anchor.depth < kBackRow ? 1 : -1;
  placements[turns[middle]].position = shifted;
  placements[turns[middle + 1]].position = anchor;
  return true;
}

bool DuplicatePrimaryCell(StagePlay& play, int k, SeededRng& rng) {
  struct Target {
    Site site;
    GridPosition cell;
  };
  std::vector<Target> targets;
  for (size_t s = 0; s < play.scenes.size(); ++s) {
    const Scene& scene = play.scenes[s];
    const SceneCast cast = SceneCast::Of(scene);
    const std::vector<int> top = cast.Top(k);
    const StageSnapshots snapshots = BuildSnapshots(scene, cast);
    for (size_t t = 1; t < scene.placements.size(); ++t) {
      const int speaker = cast.speaker_of[t];
      if (std::find(top.begin(), top.end(), speaker) == top.end()) continue;
      for (int other : top) {
        const auto& there = snapshots[t - 1][other];
        if (other != speaker && there &&
            *there != scene.placements[t].position) {
          targets.push_back({{s, t}, *there});
        }
      }
    }
  }
  if (targets.empty()) return false;
  const Target& target = Pick(targets, rng);
  play.scenes[target.site.scene].placements[target.site.quote].position =
      target.cell;
  return true;
}

bool SplitSceneSameRoom(StagePlay& play, SeededRng& rng) {
  std::vector<size_t> splittable;
  for (size_t s = 0; s < play.scenes.size(); ++s) {
    if (play.scenes[s].placements.size() >= 2) splittable.push_back(s);
  }
  if (splittable.empty()) return false;
  const size_t s = Pick(splittable, rng);
  Scene& scene = play.scenes[s];
  const size_t at = 1 + rng.Below(scene.placements.size() - 1);
  Scene tail = scene;
  tail.placements.assign(scene.placements.begin() + at,
                         scene.placements.end());
  scene.placements.resize(at);
  play.scenes.insert(play.scenes.begin() + s + 1, std::move(tail));
  Renumber(play);
  return true;
}

bool DropQuote(StagePlay& play, const TaskBundle& bundle, SeededRng& rng) {
  if (play.TotalPlacements() < 2) return false;
  std::vector<Site> sites;
  for (size_t s = 0; s < play.scenes.size(); ++s) {
    const auto& placements = play.scenes[s].placements;
    for (size_t t = 0; t < placements.size(); ++t) {
      if (bundle.reference_speakers.contains(placements[t].quote_id)) {
        sites.push_back({s, t});
      }
    }
  }
  if (sites.empty()) return false;
  const Site site = Pick(sites, rng);
  auto& placements = play.scenes[site.scene].placements;
  placements.erase(placements.begin() + site.quote);
  if (placements.empty()) {
    play.scenes.erase(play.scenes.begin() + site.scene);
    Renumber(play);
  }
  return true;
}

}  // namespace

TaskBundle GenBundle(uint64_t seed, const BundleSpec& spec) {
  SeededRng rng(seed);
  const int quotes = rng.Between(spec.min_quotes, spec.max_quotes);
  const int characters = std::clamp(
      rng.Between(spec.min_characters, spec.max_characters), 1,
      std::max(1, quotes - 2));

  std::vector<std::string> pool(std::begin(kNamePool), std::end(kNamePool));
  rng.Shuffle(pool);
  const int named = std::min<int>(characters + 2, pool.size());
  const std::vector<std::string> speakers(pool.begin(),
                                          pool.begin() + characters);

  TaskBundle bundle;
  bundle.bundle_id = absl::StrCat("synth-", seed);
  bundle.canonical_names.insert(pool.begin(), pool.begin() + named);
  for (const std::string& name : speakers) {
    if (rng.Bernoulli(0.5)) {
      bundle.alias_map[absl::StrCat(
          kHonorifics[rng.Below(std::size(kHonorifics))], name)] = name;
    }
  }

  // Everyone speaks once, the lead three times; the rest follows 1/(rank+1).
  std::vector<int> turns;
  for (int c = 0; c < characters; ++c) turns.push_back(c);
  turns.push_back(0);
  turns.push_back(0);
  double weight_total = 0.0;
  for (int c = 0; c < characters; ++c) weight_total += 1.0 / (c + 1);
  while (static_cast<int>(turns.size()) < quotes) {
    double u = rng.Uniform() * weight_total;
    int c = 0;
    while (c + 1 < characters && u >= 1.0 / (c + 1)) {
      u -= 1.0 / (c + 1);
      ++c;
    }
    turns.push_back(c);
  }
  turns.resize(quotes);
  rng.Shuffle(turns);

  const int base = 1000 + static_cast<int>(rng.Below(9000));
  for (int i = 0; i < quotes; ++i) {
    const std::string id = std::to_string(base + i);
    const std::string& speaker = speakers[turns[i]];
    bundle.quote_ids.push_back(id);
    bundle.reference_speakers[id] = speaker;
    if (i > 0) bundle.passage += ' ';
    absl::StrAppend(&bundle.passage, speaker, " answered. |", id,
                    "| \"Line ", i + 1, " of the exchange.\" ||", id, "||");
  }
  return bundle;
}

std::string GenRandom(const TaskBundle& bundle, uint64_t seed,
                      double p_correct) {
  SeededRng rng(seed);
  Scene scene;
  for (const std::string& id : bundle.quote_ids) {
    const auto ref = bundle.reference_speakers.find(id);
    std::string speaker;
    if (ref != bundle.reference_speakers.end() && rng.Bernoulli(p_correct)) {
      speaker = ref->second;
    } else {
      speaker = PickName(bundle.canonical_names, rng);
    }
    const GridPosition position =
        GridPosition::FromCell(static_cast<int>(rng.Below(kGridCells)));
    scene.placements.push_back({id, std::move(speaker), position});
  }
  StagePlay play;
  play.scenes.push_back(std::move(scene));
  return SerializeStagePlay(play);
}

std::string_view PerturbationName(PerturbationKind kind) {
  switch (kind) {
    case PerturbationKind::kMisattributeQuote:
      return "misattribute_quote";
    case PerturbationKind::kUpstagePrimary:
      return "upstage_primary";
    case PerturbationKind::kInjectDepthThrash:
      return "inject_depth_thrash";
    case PerturbationKind::kDuplicatePrimaryCell:
      return "duplicate_primary_cell";
    case PerturbationKind::kSplitSceneSameRoom:
      return "split_scene_same_room";
    case PerturbationKind::kDropQuote:
      return "drop_quote";
  }
  return "unknown";
}

absl::StatusOr<PerturbationKind> PerturbationFromName(std::string_view name) {
  for (PerturbationKind kind : kAllPerturbations) {
    if (PerturbationName(kind) == name) return kind;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown perturbation kind '", AsAbsl(name), "'"));
}

PerturbationResult GenPerturbed(const StagePlay& base, const TaskBundle& bundle,
                                const std::vector<PerturbationKind>& kinds,
                                int count, uint64_t seed, int k) {
  SeededRng rng(seed);
  PerturbationResult result;
  result.play = base;
  for (int i = 0; i < count && !kinds.empty(); ++i) {
    const PerturbationKind kind = Pick(kinds, rng);
    bool applied = false;
    switch (kind) {
      case PerturbationKind::kMisattributeQuote:
        applied = MisattributeQuote(result.play, bundle, rng);
        break;
      case PerturbationKind::kUpstagePrimary:
        applied = UpstagePrimary(result.play, k, rng);
        break;
      case PerturbationKind::kInjectDepthThrash:
        applied = InjectDepthThrash(result.play, rng);
        break;
      case PerturbationKind::kDuplicatePrimaryCell:
        applied = DuplicatePrimaryCell(result.play, k, rng);
        break;
      case PerturbationKind::kSplitSceneSameRoom:
        applied = SplitSceneSameRoom(result.play, rng);
        break;
      case PerturbationKind::kDropQuote:
        applied = DropQuote(result.play, bundle, rng);
        break;
    }
    if (applied) {
      result.applied.push_back(kind);
    } else {
      result.notices.push_back(absl::StrCat(
          AsAbsl(PerturbationName(kind)), " does not apply; skipped"));
    }
  }
  result.raw = SerializeStagePlay(result.play);
  return result;
}

}  // namespace stagescore
