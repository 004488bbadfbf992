// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cogtrans/report.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "cogtrans/error_taxonomy.hpp"
#include "cogtrans/errors.hpp"

namespace cogtrans {

void annotate_errors(EvalReport& report, Script script) {
  for (ItemRecord& item : report.items) {
    item.tags.clear();
    for (ErrorTag t : classify_errors(item.source, item.gold, item.prediction, script)) {
      item.tags.emplace_back(error_tag_name(t));
    }
  }
}

void write_report_tsv(std::ostream& out, const EvalReport& report) {
  out << "source\tgold\tprediction\tss\twa\tbleu\ttags\n";
  out << std::fixed << std::setprecision(4);
  for (const ItemRecord& item : report.items) {
    std::string tags;
    for (const std::string& t : item.tags) tags += (tags.empty() ? "" : ",") + t;
    out << to_utf8(item.source) << '\t' << to_utf8(item.gold) << '\t' << to_utf8(item.prediction)
        << '\t' << item.ss << '\t' << (item.correct ? 1 : 0) << '\t' << item.bleu << '\t' << tags
        << '\n';
  }
  out << "# n=" << report.n_items << "\tbleu=" << report.bleu << "\tss=" << report.ss
      << "\twa=" << report.wa << '\n';
}

void save_report_tsv(const std::filesystem::path& path, const EvalReport& report) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  write_report_tsv(out, report);
}

EvalReport read_report_tsv(std::istream& in) {
  std::vector<CognatePair> gold;
  std::vector<GraphemeString> preds;
  std::vector<std::vector<std::string>> tags;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty() || line[0] == '#' || line.rfind("source\t", 0) == 0) continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    for (std::size_t tab; (tab = line.find('\t', start)) != std::string::npos; start = tab + 1) {
      cols.push_back(line.substr(start, tab - start));
    }
    cols.push_back(line.substr(start));
    if (cols.size() < 3) throw ParseError(number, "expected source, gold and prediction");
    gold.push_back({graphemes(cols[0]), graphemes(cols[1])});
    preds.push_back(graphemes(cols[2]));
    tags.emplace_back();
    if (cols.size() > 6 && !cols[6].empty()) {
      std::istringstream list(cols[6]);
      for (std::string t; std::getline(list, t, ',');) tags.back().push_back(t);
    }
  }
  EvalReport report = evaluate(gold, preds);
  for (std::size_t i = 0; i < report.items.size(); ++i) report.items[i].tags = std::move(tags[i]);
  return report;
}

std::string format_summary(std::span<const std::pair<std::string, EvalReport>> models) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  out << std::left << std::setw(10) << "Metric";
  for (const auto& [name, r] : models) out << std::right << std::setw(12) << name;
  out << '\n';
  auto row = [&](const char* label, auto field) {
    out << std::left << std::setw(10) << label;
    for (const auto& [name, r] : models) out << std::right << std::setw(12) << field(r);
    out << '\n';
  };
  row("BLEU", [](const EvalReport& r) { return r.bleu; });
  row("SS", [](const EvalReport& r) { return r.ss; });
  row("WA(%)", [](const EvalReport& r) { return r.wa; });
  return out.str();
}

void write_history_tsv(std::ostream& out, std::span<const EpochRecord> history) {
  out << "epoch\ttrain_loss\tval_loss\tval_bleu\tval_ss\tval_wa\n";
  out << std::setprecision(10);
  for (const EpochRecord& r : history) {
    out << r.epoch << '\t' << r.train_loss << '\t' << r.val_loss << '\t' << r.metrics.bleu << '\t'
        << r.metrics.ss << '\t' << r.metrics.wa << '\n';
  }
}

}  // namespace cogtrans
