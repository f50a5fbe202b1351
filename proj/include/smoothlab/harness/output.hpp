#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace smoothlab::harness {

/// Shortest round-trip decimal form, so CSV output is byte-stable.
std::string format_number(double v);

/// Comma-separated table with a header row.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& row();
  CsvTable& add(double v);
  CsvTable& add(std::int64_t v);
  CsvTable& add(std::uint64_t v);
  CsvTable& add(int v) { return add(static_cast<std::int64_t>(v)); }
  CsvTable& add(bool v);
  CsvTable& add(std::string_view v);
  CsvTable& add(const char* v) { return add(std::string_view(v)); }

  std::string str() const;
  void write(const std::filesystem::path& path) const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

struct SvgPanel {
  std::string title;
  std::vector<SvgSeries> series;
};

/// Static line plot, one panel per entry laid out in a row.
std::string render_svg(const std::vector<SvgPanel>& panels, std::string_view x_label, std::string_view y_label);

void write_text(const std::filesystem::path& path, std::string_view text);

/// Runs task(i) for i in [0, n) on up to `jobs` threads. Returns the
/// message of each failed task, indexed like the tasks (empty on success).
std::vector<std::string> parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& task);

}  // namespace smoothlab::harness
