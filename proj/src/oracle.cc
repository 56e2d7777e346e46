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

#include "stagescore/oracle.h"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <vector>

#include "absl/strings/str_cat.h"
#include "stagescore/composition.h"
#include "stagescore/movement.h"
#include "stagescore/scene_cast.h"

namespace stagescore {
namespace {

constexpr int kLeafBudget = 400000;
constexpr int kPartitionLimit = 64;

constexpr const char* kMaterials[] = {
    "oak panelling with a stone hearth", "whitewashed plaster and bare boards",
    "green damask and gilt mirrors",     "rough timber and a tiled floor",
    "limestone walls and a vaulted roof"};

// Cells in the order the search tries them.
constexpr int kFrontCells[] = {0, 2, 1};
constexpr int kBackCells[] = {7, 6, 8};
constexpr int kAnyCells[] = {7, 3, 5, 6, 8, 4, 0, 2, 1};

void SetRoom(Scene& scene, int i) {
  scene.room_dimensions =
      absl::StrCat(12 + 2 * i, "ft x ", 10 + i % 3, "ft x ", 8 + i, "ft");
  scene.room_material = kMaterials[i % std::size(kMaterials)];
}

// Scene start offsets followed by the total length, most balanced first.
std::vector<std::vector<int>> Partitions(int length, int cap) {
  std::vector<std::vector<int>> out;
  const int fewest = std::max(1, (length + cap - 1) / cap);
  for (int scenes = fewest; scenes <= fewest + 1 && scenes <= length;
       ++scenes) {
    std::vector<int> bounds{0};
    auto extend = [&](auto& self, int start, int left) -> void {
      if (static_cast<int>(out.size()) >= kPartitionLimit) return;
      if (left == 1) {
        if (length - start <= cap) {
          bounds.push_back(length);
          out.push_back(bounds);
          bounds.pop_back();
        }
        return;
      }
      const int ideal = start + (length - start) / left;
      std::vector<int> ends;
      for (int e = start + 1; e <= std::min(start + cap, length - left + 1);
           ++e) {
        if (length - e <= cap * (left - 1)) ends.push_back(e);
      }
      std::stable_sort(ends.begin(), ends.end(), [ideal](int a, int b) {
        return std::abs(a - ideal) < std::abs(b - ideal);
      });
      for (int e : ends) {
        bounds.push_back(e);
        self(self, e, left - 1);
        bounds.pop_back();
      }
    };
    extend(extend, 0, scenes);
  }
  return out;
}

class LayoutSearch {
 public:
  LayoutSearch(const TaskBundle& bundle, const RewardConfig& config,
               const std::vector<std::string>& speakers,
               const std::vector<int>& bounds)
      : bundle_(bundle), config_(config), evaluator_(config) {
    const int k = config.composition.k;
    for (size_t s = 0; s + 1 < bounds.size(); ++s) {
      Scene scene;
      scene.index = static_cast<int>(s) + 1;
      SetRoom(scene, static_cast<int>(s));
      for (int q = bounds[s]; q < bounds[s + 1]; ++q) {
        scene.placements.push_back(
            {bundle.quote_ids[q], speakers[q], GridPosition{}});
      }
      casts_.push_back(SceneCast::Of(scene));
      play_.scenes.push_back(std::move(scene));
    }
    for (size_t s = 0; s < casts_.size(); ++s) {
      std::set<std::string> top;
      for (int c : casts_[s].Top(k)) top.insert(casts_[s].characters[c]);
      tops_.push_back(std::move(top));
    }
  }

  // Primaries of a later scene must already be on stage in the scene before
  // it, since an entrance from the back row cannot also be downstage.
  bool Plausible() const {
    for (size_t s = 1; s < casts_.size(); ++s) {
      for (const std::string& name : tops_[s]) {
        if (casts_[s - 1].Find(name) < 0) return false;
      }
    }
    return true;
  }

  bool Run() { return SolveScene(0); }
  bool exhausted() const { return leaves_ >= kLeafBudget; }
  const StagePlay& play() const { return play_; }
  double r() const { return r_; }

  // Greedy fill of the first candidate cell per character, ignoring the
  // perfect-score checks.
  void FillBestEffort() {
    for (size_t s = 0; s < casts_.size(); ++s) {
      const std::vector<std::vector<int>> domains = Domains(s);
      std::vector<int> cell(casts_[s].size(), 7);
      unsigned used = 0;
      for (size_t i = 0; i < domains.size(); ++i) {
        const int c = casts_[s].by_activity[i];
        const std::vector<int>& options =
            domains[i].empty() ? std::vector<int>(std::begin(kAnyCells),
                                                  std::end(kAnyCells))
                               : domains[i];
        for (int option : options) {
          if (!(used & (1u << option))) {
            cell[c] = option;
            break;
          }
        }
        used |= 1u << cell[c];
      }
      Place(s, cell);
    }
    r_ = evaluator_.ScorePlay(play_, bundle_).r;
  }

 private:
  // Candidate cells per character, indexed by activity rank.
  std::vector<std::vector<int>> Domains(size_t s) const {
    const SceneCast& cast = casts_[s];
    const int k = config_.composition.k;
    std::map<std::string, int> previous;
    if (s > 0) {
      for (const Placement& p : play_.scenes[s - 1].placements) {
        previous[p.speaker] = p.position.cell();
      }
    }
    std::vector<std::vector<int>> domains;
    for (int rank = 0; rank < cast.size(); ++rank) {
      const std::string& name = cast.characters[cast.by_activity[rank]];
      const auto prev = previous.find(name);
      std::vector<int> domain;
      if (rank < k) {
        if (s == 0) {
          domain.assign(std::begin(kFrontCells), std::end(kFrontCells));
        } else if (prev != previous.end() && prev->second / 3 == 0) {
          domain = {prev->second};
        }
      } else if (s == 0) {
        domain.assign(std::begin(kAnyCells), std::end(kAnyCells));
      } else if (prev == previous.end()) {
        domain.assign(std::begin(kBackCells), std::end(kBackCells));
      } else {
        domain = {prev->second};
        for (int cell : kBackCells) {
          if (cell != prev->second) domain.push_back(cell);
        }
      }
      if (s + 1 < casts_.size() && tops_[s + 1].contains(name)) {
        std::erase_if(domain, [](int cell) { return cell / 3 != 0; });
      }
      domains.push_back(std::move(domain));
    }
    return domains;
  }

  void Place(size_t s, const std::vector<int>& cell) {
    Scene& scene = play_.scenes[s];
    for (size_t t = 0; t < scene.placements.size(); ++t) {
      scene.placements[t].position =
          GridPosition::FromCell(cell[casts_[s].speaker_of[t]]);
    }
  }

  bool ScenePerfect(size_t s) const {
    StagePlay alone;
    alone.scenes.push_back(play_.scenes[s]);
    const CompositionScores composition =
        ScoreComposition(alone, TaskBundle{}, config_.composition);
    if (composition.sv != 3.0 || composition.cp != 6.0) return false;
    return ScoreMovement(alone, config_.movement).mc == 6.0;
  }

  bool SolveScene(size_t s) {
    if (s == casts_.size()) {
      r_ = evaluator_.ScorePlay(play_, bundle_).r;
      return r_ == 1.0;
    }
    const std::vector<std::vector<int>> domains = Domains(s);
    for (const auto& domain : domains) {
      if (domain.empty()) return false;
    }
    std::vector<int> cell(casts_[s].size(), -1);
    return Assign(s, 0, domains, cell, 0u);
  }

  bool Assign(size_t s, size_t rank,
              const std::vector<std::vector<int>>& domains,
              std::vector<int>& cell, unsigned used) {
    if (leaves_ >= kLeafBudget) return false;
    if (rank == domains.size()) {
      ++leaves_;
      Place(s, cell);
      return ScenePerfect(s) && SolveScene(s + 1);
    }
    const int c = casts_[s].by_activity[rank];
    for (int option : domains[rank]) {
      if (used & (1u << option)) continue;
      cell[c] = option;
      if (Assign(s, rank + 1, domains, cell, used | (1u << option))) {
        return true;
      }
    }
    return false;
  }

  const TaskBundle& bundle_;
  const RewardConfig& config_;
  Evaluator evaluator_;
  StagePlay play_;
  std::vector<SceneCast> casts_;
  std::vector<std::set<std::string>> tops_;
  int leaves_ = 0;
  double r_ = 0.0;
};

}  // namespace

OracleResult GenGreedyOracle(const TaskBundle& bundle,
                             const RewardConfig& config) {
  const std::string fallback_speaker = bundle.canonical_names.empty()
                                           ? "Narrator"
                                           : *bundle.canonical_names.begin();
  std::vector<std::string> speakers;
  for (const std::string& id : bundle.quote_ids) {
    const auto ref = bundle.reference_speakers.find(id);
    speakers.push_back(ref != bundle.reference_speakers.end()
                           ? ref->second
                           : fallback_speaker);
  }

  OracleResult result;
  const int length = static_cast<int>(speakers.size());
  if (length == 0) return result;
  const std::vector<std::vector<int>> partitions =
      Partitions(length, std::max(1, config.scene.max_scene_length));
  for (const std::vector<int>& bounds : partitions) {
    LayoutSearch search(bundle, config, speakers, bounds);
    if (!search.Plausible()) continue;
    if (search.Run()) {
      result.play = search.play();
      result.r = search.r();
      result.exact = true;
      result.raw = SerializeStagePlay(result.play);
      return result;
    }
    if (search.exhausted()) break;
  }
  LayoutSearch fallback(bundle, config, speakers,
                        partitions.empty() ? std::vector<int>{0, length}
                                           : partitions.front());
  fallback.FillBestEffort();
  result.play = fallback.play();
  result.r = fallback.r();
  result.raw = SerializeStagePlay(result.play);
  return result;
}

}  // namespace stagescore
