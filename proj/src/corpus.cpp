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

#include "layerens/corpus.hpp"

#include <algorithm>
#include <unordered_set>

#include "io.hpp"
#include "json.hpp"
#include "layerens/error.hpp"

namespace layerens {
namespace {

using nlohmann::json;

void check_component(const std::string& component) {
  if (component.empty()) fail(ErrorCode::kEmptyComponent, "empty intent component");
  for (unsigned char c : component) {
    if (c == static_cast<unsigned char>(kIntentSeparator)) {
      fail(ErrorCode::kReservedSeparatorInComponent,
           "intent component contains '+': " + component);
    }
    if (c < 0x20 || c == 0x7F) {
      fail(ErrorCode::kInvalidArgument, "non-printable byte in intent: " + component);
    }
  }
}

std::vector<std::string> split_on_separator(std::string_view text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(kIntentSeparator, start);
    parts.emplace_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

[[noreturn]] void fail_at(ErrorCode code, std::string_view source, std::size_t line,
                          const std::string& what) {
  fail(code, std::string(source) + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

IntentLabel canonicalize_label(std::span<const std::string> components) {
  if (components.empty()) fail(ErrorCode::kEmptyComponent, "intent label has no components");
  std::vector<std::string> sorted(components.begin(), components.end());
  for (const auto& c : sorted) check_component(c);
  std::sort(sorted.begin(), sorted.end());
  if (auto dup = std::adjacent_find(sorted.begin(), sorted.end()); dup != sorted.end()) {
    fail(ErrorCode::kDuplicateComponent, "duplicate intent component: " + *dup);
  }
  std::string text = sorted.front();
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    text += kIntentSeparator;
    text += sorted[i];
  }
  return IntentLabel(std::move(text));
}

IntentLabel IntentLabel::parse(std::string_view text) {
  const auto parts = split_on_separator(text);
  return canonicalize_label(parts);
}

LabelSpace::LabelSpace(std::vector<IntentLabel> labels) {
  for (auto& label : labels) {
    if (index_.contains(label.text())) {
      fail(ErrorCode::kDuplicateLabel, "duplicate label: " + label.text());
    }
    intern(label);
  }
}

LabelId LabelSpace::intern(const IntentLabel& label) {
  auto [it, inserted] =
      index_.try_emplace(label.text(), static_cast<std::uint32_t>(labels_.size()));
  if (inserted) labels_.push_back(label);
  return LabelId{it->second};
}

std::optional<LabelId> LabelSpace::find(const IntentLabel& label) const {
  auto it = index_.find(label.text());
  if (it == index_.end()) return std::nullopt;
  return LabelId{it->second};
}

LabelId LabelSpace::at(const IntentLabel& label) const {
  auto id = find(label);
  if (!id) fail(ErrorCode::kUnknownLabel, "label not in label space: " + label.text());
  return *id;
}

const IntentLabel& LabelSpace::label(LabelId id) const {
  if (id.value >= labels_.size()) {
    fail(ErrorCode::kIndexOutOfRange, "label id " + std::to_string(id.value) +
                                          " outside label space of " +
                                          std::to_string(labels_.size()));
  }
  return labels_[id.value];
}

std::vector<LabelId> GoldSet::gold_labels() const {
  std::vector<LabelId> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) out.push_back(ex.gold);
  return out;
}

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  };
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) tokens.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return tokens;
}

LabelSpace load_label_space(const std::filesystem::path& path) {
  const std::string text = internal::read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
  if (!doc.is_array()) fail(ErrorCode::kParseError, path.string() + ": expected a JSON list");
  std::vector<IntentLabel> labels;
  for (const auto& item : doc) {
    if (!item.is_string()) {
      fail(ErrorCode::kParseError, path.string() + ": label entries must be strings");
    }
    labels.push_back(IntentLabel::parse(item.get<std::string>()));
  }
  return LabelSpace(std::move(labels));
}

Corpus parse_gold(std::string_view text, const LoadGoldOptions& options,
                  std::string_view source_name) {
  Corpus corpus;
  if (options.mode == LabelSpaceMode::kDeclared) {
    if (!options.label_space_path) {
      fail(ErrorCode::kInvalidArgument, "declared label space mode needs a label space file");
    }
    corpus.labels = load_label_space(*options.label_space_path);
  }
  corpus.gold.dataset_id = options.dataset_id.value_or(std::string(source_name));

  std::unordered_set<std::string> seen_ids;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      fail_at(ErrorCode::kParseError, source_name, line_no, e.what());
    }
    if (!obj.is_object()) fail_at(ErrorCode::kParseError, source_name, line_no, "not an object");

    GoldExample ex;
    const auto id = obj.find("id");
    if (id == obj.end() || !id->is_string()) {
      fail_at(ErrorCode::kParseError, source_name, line_no, "missing string field \"id\"");
    }
    ex.id = id->get<std::string>();

    const auto tokens = obj.find("tokens");
    if (tokens == obj.end()) {
      fail_at(ErrorCode::kParseError, source_name, line_no, "missing field \"tokens\"");
    }
    if (tokens->is_string()) {
      ex.tokens = split_whitespace(tokens->get<std::string>());
    } else if (tokens->is_array()) {
      for (const auto& t : *tokens) {
        if (!t.is_string()) {
          fail_at(ErrorCode::kParseError, source_name, line_no, "tokens must be strings");
        }
        ex.tokens.push_back(t.get<std::string>());
      }
    } else {
      fail_at(ErrorCode::kParseError, source_name, line_no, "\"tokens\" must be a list");
    }

    const auto intents = obj.find("intents");
    if (intents == obj.end()) {
      fail_at(ErrorCode::kParseError, source_name, line_no, "missing field \"intents\"");
    }
    std::vector<std::string> components;
    const auto add = [&](const json& v) {
      if (!v.is_string()) {
        fail_at(ErrorCode::kParseError, source_name, line_no, "intents must be strings");
      }
      for (auto& part : split_on_separator(v.get<std::string>())) {
        components.push_back(std::move(part));
      }
    };
    if (intents->is_array()) {
      for (const auto& v : *intents) add(v);
    } else {
      add(*intents);
    }
    IntentLabel label = [&] {
      try {
        return canonicalize_label(components);
      } catch (const Error& e) {
        fail_at(e.code(), source_name, line_no, e.what());
      }
    }();

    if (options.mode == LabelSpaceMode::kDeclared) {
      auto found = corpus.labels.find(label);
      if (!found) {
        fail_at(ErrorCode::kUnknownLabel, source_name, line_no,
                "label not declared: " + label.text());
      }
      ex.gold = *found;
    } else {
      ex.gold = corpus.labels.intern(label);
    }

    if (!seen_ids.insert(ex.id).second) {
      fail_at(ErrorCode::kDuplicateExampleId, source_name, line_no,
              "duplicate example id: " + ex.id);
    }
    corpus.gold.examples.push_back(std::move(ex));
  }
  return corpus;
}

Corpus load_gold(const std::filesystem::path& path, const LoadGoldOptions& options) {
  const std::string text = internal::read_file(path);
  LoadGoldOptions resolved = options;
  if (!resolved.dataset_id) resolved.dataset_id = path.stem().string();
  return parse_gold(text, resolved, path.string());
}

std::string serialize_gold(const GoldSet& gold, const LabelSpace& labels) {
  std::string out;
  for (const auto& ex : gold.examples) {
    json obj;
    obj["id"] = ex.id;
    obj["tokens"] = ex.tokens;
    obj["intents"] = split_on_separator(labels.label(ex.gold).text());
    out += obj.dump();
    out += '\n';
  }
  return out;
}

void save_gold(const std::filesystem::path& path, const GoldSet& gold,
               const LabelSpace& labels) {
  internal::write_file(path, serialize_gold(gold, labels));
}

std::string serialize_label_space(const LabelSpace& labels) {
  json arr = json::array();
  for (const auto& l : labels.labels()) arr.push_back(l.text());
  return arr.dump() + "\n";
}

}  // namespace layerens
