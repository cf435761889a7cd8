// Copyright 2026 The wavegenre Authors
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

#pragma once

// Published per-layer output shapes for the six architectures and a
// comparison against shape_trace(). Rows skip flatten and dropout, which have
// no row of their own in the published layouts.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wavegenre/model/architecture.hpp"

namespace wavegenre::testing {

struct ReferenceRow {
  ReferenceRow(std::string layer_, std::size_t filters_, tensor::Shape shape_,
               std::optional<std::size_t> trace_row_ = {}, std::string exception_ = {})
      : layer(std::move(layer_)),
        filters(filters_),
        shape(std::move(shape_)),
        trace_row(trace_row_),
        exception(std::move(exception_)) {}

  std::string layer;
  std::size_t filters = 0;  // 0 where the layout prints "-"
  tensor::Shape shape;
  // Index into the visible trace; defaults to the row's own position.
  std::optional<std::size_t> trace_row;
  // Non-empty marks a known inconsistency inside the published layout.
  std::string exception;
};

inline std::vector<ReferenceRow> reference_layout(const std::string& name) {
  using S = tensor::Shape;
  if (name == "resnet1d") {
    std::vector<ReferenceRow> rows{{"Conv1D", 128, S{128, 36750}}};
    const std::size_t ch[] = {128, 128, 256, 256, 256, 256, 256, 256, 512};
    const std::size_t len[] = {36750, 12250, 4083, 1361, 453, 151, 50, 16, 5};
    for (int i = 0; i < 9; ++i) {
      rows.push_back({"Res1D", ch[i], S{ch[i], len[i]}});
      rows.push_back({"MaxPool", 0, S{ch[i], i == 8 ? 1 : len[i + 1]}});
    }
    rows.push_back({"Conv1D", 512, S{512, 1}});
    rows.push_back({"Output", 0, S{10}});
    return rows;
  }
  if (name == "sample_cnn") {
    return {
        {"Conv1D", 128, S{128, 36750}},
        {"Conv1D", 128, S{128, 36750}},
        {"MaxPool", 0, S{128, 12250}},
        {"Conv1D", 256, S{128, 12250}, {},
         "filter column lists 256 while the shape column shows 128 channels"},
        {"MaxPool", 0, S{128, 4083}},
        {"Conv1D", 256, S{256, 4083}},
        {"MaxPool", 0, S{256, 1361}},
        {"Conv1D", 256, S{256, 1361}},
        {"MaxPool", 0, S{256, 453}},
        {"Conv1D", 256, S{256, 453}},
        {"MaxPool", 0, S{256, 151}},
        {"Conv1D", 256, S{256, 151}},
        {"MaxPool", 0, S{256, 50}},
        {"Conv1D", 256, S{256, 16}, 15,
         "one conv (256x50) and pool (256x16) pair has no row; later rows shift by two"},
        {"MaxPool", 0, S{256, 5}, 16},
        {"Conv1D", 512, S{512, 5}, 17},
        {"MaxPool", 0, S{512}, 18, "shape printed as 512 for 512x1"},
        {"Conv1D", 512, S{512}, 19, "shape printed as 512 for 512x1"},
        {"Output", 0, S{10}, 20},
    };
  }
  if (name == "pons_scale") {
    return {
        {"Conv1D", 64, S{64, 36750}},   {"Conv1D", 64, S{64, 36748}},
        {"MaxPool", 0, S{64, 12249}},   {"Conv1D", 64, S{64, 12247}},
        {"MaxPool", 0, S{64, 4082}},    {"Conv1D", 128, S{128, 4080}},
        {"MaxPool", 0, S{128, 1360}},   {"Conv1D", 128, S{128, 1358}},
        {"MaxPool", 0, S{128, 452}},    {"Conv1D", 128, S{128, 450}},
        {"MaxPool", 0, S{128, 150}},    {"Conv1D", 256, S{256, 148}},
        {"MaxPool", 0, S{256, 49}},     {"Output", 0, S{10}},
    };
  }
  if (name == "dieleman") {
    return {
        {"Conv1D", 1, S{1, 430}},   {"Conv1D", 32, S{32, 212}}, {"Conv1D", 32, S{32, 205}},
        {"MaxPool", 0, S{32, 51}},  {"Conv1D", 32, S{32, 44}},  {"MaxPool", 0, S{32, 11}},
        {"FC", 0, S{100}},          {"Output", 0, S{10}},
    };
  }
  if (name == "abdoli_esc") {
    return {
        {"Conv1D", 64, S{64, 109739}}, {"MaxPool", 0, S{64, 13717}}, {"Conv1D", 32, S{32, 6859}},
        {"MaxPool", 0, S{32, 857}},    {"Conv1D", 64, S{64, 429}},   {"Conv1D", 128, S{128, 215}},
        {"Conv1D", 256, S{256, 108}},  {"MaxPool", 0, S{256, 27}},   {"FC", 0, S{128}},
        {"FC", 0, S{64}},              {"Output", 0, S{10}},
    };
  }
  if (name == "koerich") {
    return {
        {"Conv1D", 32, S{32, 109739}}, {"AvgPool", 0, S{32, 13717}}, {"Conv1D", 16, S{16, 6731}},
        {"AvgPool", 0, S{16, 841}},    {"Conv1D", 32, S{32, 389}},   {"Conv1D", 64, S{64, 179}},
        {"Conv1D", 128, S{128, 82}},   {"MaxPool", 0, S{128, 41}},   {"FC", 0, S{256}},
        {"Output", 0, S{10}},
    };
  }
  return {};
}

enum class RowStatus { match, mismatch, flagged };

struct RowComparison {
  ReferenceRow row;
  tensor::Shape traced;
  std::size_t traced_filters = 0;
  RowStatus status = RowStatus::mismatch;
};

struct LayoutComparison {
  std::vector<RowComparison> rows;
  // Visible trace rows no reference row points at.
  std::vector<std::size_t> unreferenced;
};

inline bool same_shape(const tensor::Shape& published, const tensor::Shape& traced) {
  if (published == traced) return true;
  // A lone channel count stands for C x 1.
  return published.size() == 1 && traced.size() == 2 && traced[1] == 1 &&
         published[0] == traced[0];
}

inline LayoutComparison compare_layout(const model::ArchitectureSpec& spec) {
  std::vector<model::TraceEntry> visible;
  for (const auto& e : model::shape_trace(spec)) {
    if (e.kind != model::LayerKind::flatten && e.kind != model::LayerKind::dropout) {
      visible.push_back(e);
    }
  }
  LayoutComparison out;
  std::vector<bool> used(visible.size(), false);
  const auto rows = reference_layout(spec.name);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    RowComparison c{rows[i], {}, 0, RowStatus::mismatch};
    const std::size_t t = rows[i].trace_row.value_or(i);
    if (t < visible.size()) {
      used[t] = true;
      c.traced = visible[t].shape;
      const auto& layer = spec.layers[visible[t].index];
      c.traced_filters = layer.filters.value_or(0);
      const bool shape_ok = rows[i].shape == c.traced;
      const bool filters_ok = rows[i].filters == 0 || rows[i].filters == c.traced_filters;
      if (shape_ok && filters_ok && rows[i].exception.empty()) {
        c.status = RowStatus::match;
      } else if (!rows[i].exception.empty() && same_shape(rows[i].shape, c.traced)) {
        c.status = RowStatus::flagged;
      }
    }
    out.rows.push_back(c);
  }
  for (std::size_t t = 0; t < visible.size(); ++t) {
    if (!used[t]) out.unreferenced.push_back(t);
  }
  return out;
}

}  // namespace wavegenre::testing
