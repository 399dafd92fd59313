/* Copyright 2026 The layerens Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Label space and gold-labeled evaluation sets.
//
// Corpus files are JSON Lines, one example per line:
//   {"id": "atis-0001", "tokens": ["i", "want", "..."], "intents": ["flight"]}
// Multi-intent examples list several intents; they are merged into a single
// class whose text is the "+"-join of the sorted components. Keys other than
// id/tokens/intents (slot tags and so on) are ignored.

#ifndef LAYERENS_CORPUS_HPP_
#define LAYERENS_CORPUS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace layerens {

inline constexpr char kIntentSeparator = '+';

// Canonical intent class text. Construct through canonicalize_label() or
// IntentLabel::parse(); the constructor is private so an instance is always
// canonical.
class IntentLabel {
 public:
  // Splits `text` on '+' and canonicalizes the components.
  static IntentLabel parse(std::string_view text);

  const std::string& text() const noexcept { return text_; }

  friend bool operator==(const IntentLabel&, const IntentLabel&) = default;
  friend auto operator<=>(const IntentLabel&, const IntentLabel&) = default;

 private:
  friend IntentLabel canonicalize_label(std::span<const std::string>);
  explicit IntentLabel(std::string text) : text_(std::move(text)) {}

  std::string text_;
};

// Throws kEmptyComponent (also for an empty list),
// kReservedSeparatorInComponent, kDuplicateComponent, or kInvalidArgument
// for non-printable bytes.
IntentLabel canonicalize_label(std::span<const std::string> components);

// Position of a label inside a LabelSpace.
struct LabelId {
  std::uint32_t value = 0;

  friend bool operator==(LabelId, LabelId) = default;
  friend auto operator<=>(LabelId, LabelId) = default;
};

// Prediction slot meaning "no label" (majority-only combination abstains).
inline constexpr LabelId kNoLabel{0xFFFFFFFFu};

class LabelSpace {
 public:
  LabelSpace() = default;
  // Throws kDuplicateLabel.
  explicit LabelSpace(std::vector<IntentLabel> labels);

  // Appends the label if unseen; returns its id either way.
  LabelId intern(const IntentLabel& label);

  std::optional<LabelId> find(const IntentLabel& label) const;
  // Throws kUnknownLabel.
  LabelId at(const IntentLabel& label) const;

  const IntentLabel& label(LabelId id) const;
  const std::vector<IntentLabel>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return labels_.size(); }

 private:
  std::vector<IntentLabel> labels_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

struct GoldExample {
  std::string id;
  std::vector<std::string> tokens;
  LabelId gold;
};

struct GoldSet {
  std::string dataset_id;
  std::vector<GoldExample> examples;

  std::size_t size() const noexcept { return examples.size(); }
  std::vector<LabelId> gold_labels() const;
};

enum class LabelSpaceMode { kDeclared, kInferred };

struct Corpus {
  LabelSpace labels;
  GoldSet gold;
};

struct LoadGoldOptions {
  LabelSpaceMode mode = LabelSpaceMode::kInferred;
  // Required in declared mode: JSON list of label strings.
  std::optional<std::filesystem::path> label_space_path;
  // Defaults to the corpus file stem.
  std::optional<std::string> dataset_id;
};

// Throws kIoError, kParseError (message carries the 1-based line),
// kUnknownLabel (declared mode), kDuplicateExampleId.
Corpus load_gold(const std::filesystem::path& path,
                 const LoadGoldOptions& options = {});

// Parses corpus text; `source_name` only decorates error messages.
Corpus parse_gold(std::string_view text, const LoadGoldOptions& options,
                  std::string_view source_name);

LabelSpace load_label_space(const std::filesystem::path& path);

// Re-serializes in the corpus JSONL format. Multi-intent labels are written
// as their sorted components.
std::string serialize_gold(const GoldSet& gold, const LabelSpace& labels);
void save_gold(const std::filesystem::path& path, const GoldSet& gold,
               const LabelSpace& labels);
std::string serialize_label_space(const LabelSpace& labels);

// Whitespace split, as applied to string-valued "tokens" fields.
std::vector<std::string> split_whitespace(std::string_view text);

}  // namespace layerens

#endif  // LAYERENS_CORPUS_HPP_
