// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cogtrans {

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

// Standalone SVG documents. Throws EmptyInput when there is nothing to draw.
std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, std::span<const Series> series);
std::string svg_bar_chart(const std::string& title, const std::string& y_label,
                          std::span<const std::pair<std::string, double>> bars);

}  // namespace cogtrans
