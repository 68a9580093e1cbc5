// Copyright 2026 The ssdecode Authors.
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

#include "ssd/table_model.h"

#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <system_error>

#include "ssd/errors.h"

namespace ssd {
namespace {

constexpr std::string_view kMagic = "table-fixture";
constexpr int kVersion = 1;

// Splits on spaces/tabs; the fixture grammar has no quoting.
class FieldReader {
 public:
  FieldReader(std::string_view line, std::size_t line_no)
      : line_(line), line_no_(line_no) {}

  std::string_view Next() {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) ++pos_;
    if (pos_ >= line_.size()) Fail("unexpected end of record");
    const std::size_t start = pos_;
    while (pos_ < line_.size() && line_[pos_] != ' ' && line_[pos_] != '\t') ++pos_;
    return line_.substr(start, pos_ - start);
  }

  template <typename T>
  T Number() {
    const std::string_view field = Next();
    T value{};
    const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || end != field.data() + field.size()) {
      Fail("bad number '" + std::string(field) + "'");
    }
    return value;
  }

  bool AtEnd() {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t' ||
                                   line_[pos_] == '\r')) {
      ++pos_;
    }
    return pos_ >= line_.size();
  }

  [[noreturn]] void Fail(const std::string& what) const {
    throw FormatError("table fixture line " + std::to_string(line_no_) + ": " + what);
  }

 private:
  std::string_view line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

void AppendDouble(std::string& out, double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, end);
}

}  // namespace

TableModel::TableModel(std::size_t vocab_size) : vocab_(vocab_size) {
  if (vocab_ < 1) throw std::invalid_argument("vocab_size must be >= 1");
}

void TableModel::Add(std::vector<TokenId> tokens, SequenceLogits logits) {
  if (logits.positions() != tokens.size() || logits.vocab() != vocab_) {
    throw std::invalid_argument("table entry shape mismatch");
  }
  table_.insert_or_assign(std::move(tokens), std::move(logits));
}

SequenceLogits TableModel::Evaluate(const SequenceState& state) const {
  const std::vector<TokenId> key(state.tokens().begin(), state.tokens().end());
  const auto it = table_.find(key);
  if (it == table_.end()) {
    throw FixtureMissError("no table entry for sequence " + ToRecord(state));
  }
  return it->second;
}

void TableModel::Save(std::ostream& out) const { out << ToString(); }

std::string TableModel::ToString() const {
  std::string text;
  text.append(kMagic).append(" ").append(std::to_string(kVersion)).append(" ");
  text.append(std::to_string(vocab_)).append("\n");
  for (const auto& [tokens, logits] : table_) {
    text.append(std::to_string(tokens.size()));
    for (TokenId t : tokens) text.append(" ").append(std::to_string(t));
    for (double v : logits.values()) {
      text.push_back(' ');
      AppendDouble(text, v);
    }
    text.push_back('\n');
  }
  return text;
}

TableModel TableModel::Load(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<TableModel> model;
  while (std::getline(in, line)) {
    ++line_no;
    FieldReader reader(line, line_no);
    if (reader.AtEnd() || line.front() == '#') continue;
    FieldReader fields(line, line_no);
    if (!model) {
      if (fields.Next() != kMagic) fields.Fail("missing table-fixture header");
      if (fields.Number<int>() != kVersion) fields.Fail("unsupported version");
      model.emplace(fields.Number<std::size_t>());
      if (!fields.AtEnd()) fields.Fail("trailing fields in header");
      continue;
    }
    const auto n = fields.Number<std::size_t>();
    std::vector<TokenId> tokens(n);
    for (auto& t : tokens) t = fields.Number<TokenId>();
    std::vector<double> values(n * model->vocab_);
    for (auto& v : values) v = fields.Number<double>();
    if (!fields.AtEnd()) fields.Fail("trailing fields in record");
    model->Add(std::move(tokens), SequenceLogits(n, model->vocab_, std::move(values)));
  }
  if (!model) throw FormatError("table fixture is empty");
  return std::move(*model);
}

TableModel TableModel::Parse(const std::string& text) {
  std::istringstream in(text);
  return Load(in);
}

TableModel TableModel::LoadFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open table fixture " + path.string());
  return Load(in);
}

void TableModel::SaveFile(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write table fixture " + path.string());
  Save(out);
}

}  // namespace ssd
