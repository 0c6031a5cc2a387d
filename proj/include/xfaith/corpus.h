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

#ifndef XFAITH_CORPUS_H_
#define XFAITH_CORPUS_H_

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace xfaith {

struct Sentence {
  std::string text;   // NFC, trimmed, non-empty
  std::size_t index;  // position in the parent sequence

  bool operator==(const Sentence&) const = default;
};

// One cross-lingual document/summary pair. Documents are premises, summary
// sentences are hypotheses.
struct CorpusExample {
  std::string id;
  std::string src_lang;
  std::string tgt_lang;
  std::vector<Sentence> doc_sents;
  std::vector<Sentence> sum_sents;
  // Comparable document in the summary language, when the corpus has one.
  std::optional<std::vector<Sentence>> doc_tgt_sents;
  // Reference summary in the source language.
  std::optional<std::vector<Sentence>> ref_sum_src;

  // Document sentences joined in order with single spaces.
  std::string DocumentText() const;
  std::string LanguagePair() const { return src_lang + "-" + tgt_lang; }

  bool operator==(const CorpusExample&) const = default;
};

using Corpus = std::vector<CorpusExample>;

struct CorpusOptions {
  // Accepted language codes; empty accepts any non-empty code.
  std::set<std::string> languages;
};

// Reads corpus JSONL. Blank lines are skipped. Throws ParseError (with the
// 1-based line number) on malformed records and ValidationError on
// duplicate ids, empty sentence lists or disallowed languages.
Corpus ParseCorpus(std::istream& in, const CorpusOptions& options = {});

std::string SerializeExample(const CorpusExample& example);
std::string SerializeCorpus(const Corpus& corpus);

// Builds a sentence list from raw strings, applying NFC and trimming.
// Throws ValidationError if any string is empty after trimming.
std::vector<Sentence> MakeSentences(const std::vector<std::string>& texts);

// Rule-based fallback splitter. A sentence ends after a run of . ! ? that is
// followed by whitespace or end of text, or after any run of 。！？ (which
// need no following space).
std::vector<Sentence> SplitSentences(std::string_view text,
                                     std::string_view lang);

enum class NliLabel { kEntailment, kNeutral, kContradiction };

std::string_view NliLabelName(NliLabel label);
NliLabel ParseNliLabel(std::string_view name);

// One XNLI test item with all its translations.
struct XnliAlignedRow {
  NliLabel gold_label;
  std::map<std::string, std::string> premise;     // lang -> text
  std::map<std::string, std::string> hypothesis;  // lang -> text
};

struct NliPair {
  std::string premise;
  std::string hypothesis;
  NliLabel gold_label;

  bool operator==(const NliPair&) const = default;
};

std::vector<XnliAlignedRow> ParseXnliRows(std::istream& in);

// Pairs the premise in premise_lang with the hypothesis in hypothesis_lang
// for every row. Throws ValidationError naming the row index when either
// language is missing.
std::vector<NliPair> DeriveCrossPairs(const std::vector<XnliAlignedRow>& rows,
                                      std::string_view premise_lang,
                                      std::string_view hypothesis_lang);

}  // namespace xfaith

#endif  // XFAITH_CORPUS_H_
