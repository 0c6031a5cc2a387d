// Copyright 2026 The xfaith Authors.
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

#ifndef XFAITH_ANNOTATE_H_
#define XFAITH_ANNOTATE_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace xfaith {

enum class Faithful { kNo = 0, kYes = 1 };

std::string_view FaithfulName(Faithful f);
Faithful ParseFaithful(std::string_view name);

struct SentenceScore {
  std::string id;
  std::size_t sentence = 0;
  double score = 0.0;
};

struct FaithfulnessAnnotation {
  std::string id;
  std::size_t sentence = 0;
  double score = 0.0;
  Faithful label = Faithful::kYes;

  bool operator==(const FaithfulnessAnnotation&) const = default;
};

// Labels the floor(pct/100 * n) lowest-scoring sentences "no" (ties go to
// the earlier input position) and everything else "yes". Output follows
// input order.
std::vector<FaithfulnessAnnotation> AnnotateThreshold(
    const std::vector<SentenceScore>& scores, double pct);

// Ids either dropped from a corpus (Clean, Random) or kept (Test_Faith).
struct RemovalSet {
  std::string rule;  // "clean", "random", "test_faith"
  double fraction = 0.0;
  std::vector<std::string> ids;

  // "# rule=<rule> fraction=<f>" then one id per line.
  std::string Serialize() const;
  static RemovalSet Parse(std::istream& in);
};

struct ExampleScores {
  std::string id;
  std::vector<double> sentence_scores;
};

// Mean sentence score per example; the floor(pct/100 * #examples) lowest
// examples are removed. Ids are listed in input order.
RemovalSet CleanRemoval(const std::vector<ExampleScores>& examples, double pct);

// Same cardinality as CleanRemoval(examples, pct) but drawn uniformly with
// a seeded generator.
RemovalSet RandomRemoval(const std::vector<std::string>& ids, double pct,
                         std::uint64_t seed);

using IdScore = std::pair<std::string, double>;

// Each stream is min-max normalised over the corpus (a constant stream
// becomes all zeros), the two are averaged per id, and the top
// floor(fraction * n) ids are retained (ties to the earlier input position).
// The id sets of the two streams must match.
RemovalSet SelectTestFaith(const std::vector<IdScore>& faithfulness,
                           const std::vector<IdScore>& similarity,
                           double fraction = 0.10);

// Cross-lingual similarity backend used for Test_Faith.
class SimilarityScorer {
 public:
  virtual ~SimilarityScorer() = default;
  // Similarity in [-1, 1].
  virtual double Similarity(std::string_view a, std::string_view b) const = 0;
  virtual std::string Identity() const = 0;
};

// Cosine similarity of token-count vectors under the default tokenizer.
// Only meaningful when the two texts share a script; it stands in for an
// embedding model in offline runs.
class LexicalSimilarity : public SimilarityScorer {
 public:
  double Similarity(std::string_view a, std::string_view b) const override;
  std::string Identity() const override { return "lexical-cosine@1"; }
};

std::string SerializeAnnotation(const FaithfulnessAnnotation& a);
FaithfulnessAnnotation ParseAnnotation(std::string_view line);

}  // namespace xfaith

#endif  // XFAITH_ANNOTATE_H_
