#include "genesynth/signal.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace genesynth {

namespace {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text, std::size_t line) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != text.size())
    throw SignalError("csv line " + std::to_string(line) + ": not a number: '" + text + "'");
  return v;
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    auto b = cell.find_first_not_of(" \t\r");
    auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',')
    cells.emplace_back();
  return cells;
}

} // namespace

Signal::Signal(std::vector<double> times, std::vector<std::string> names,
               std::vector<std::vector<double>> columns)
    : times_(std::move(times)), names_(std::move(names)), columns_(std::move(columns)) {
  if (times_.empty())
    throw SignalError("signal needs at least one time point");
  if (std::abs(times_.front()) > kTimeEps)
    throw SignalError("signal must start at t = 0");
  times_.front() = 0.0;
  for (std::size_t i = 1; i < times_.size(); ++i)
    if (!(times_[i] > times_[i - 1]))
      throw SignalError("signal times must be strictly increasing");
  if (names_.size() != columns_.size())
    throw SignalError("variable name / column count mismatch");
  for (std::size_t c = 0; c < names_.size(); ++c) {
    if (columns_[c].size() != times_.size())
      throw SignalError("variable '" + names_[c] + "' has " + std::to_string(columns_[c].size()) +
                        " samples, expected " + std::to_string(times_.size()));
    for (std::size_t d = 0; d < c; ++d)
      if (names_[d] == names_[c])
        throw SignalError("duplicate variable '" + names_[c] + "'");
  }
}

bool Signal::has(const std::string& var) const {
  return std::find(names_.begin(), names_.end(), var) != names_.end();
}

std::size_t Signal::column_of(const std::string& var) const {
  auto it = std::find(names_.begin(), names_.end(), var);
  if (it == names_.end())
    throw SignalError("unknown variable '" + var + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

std::span<const double> Signal::values(const std::string& var) const {
  return columns_[column_of(var)];
}

double Signal::sample_at(const std::string& var, double t) const {
  const auto& col = columns_[column_of(var)];
  if (t < -kTimeEps || t > t_end() + kTimeEps)
    throw SignalError("time " + format_double(t) + " outside signal range [0, " +
                      format_double(t_end()) + "]");
  if (times_.size() == 1)
    return col.front();
  auto hi = std::upper_bound(times_.begin(), times_.end(), t);
  if (hi == times_.begin())
    return col.front();
  if (hi == times_.end())
    return col.back();
  auto j = static_cast<std::size_t>(hi - times_.begin());
  auto i = j - 1;
  double w = (t - times_[i]) / (times_[j] - times_[i]);
  return col[i] + w * (col[j] - col[i]);
}

std::size_t Signal::index_of(double t) const {
  auto it = std::lower_bound(times_.begin(), times_.end(), t - kTimeEps);
  if (it == times_.end() || std::abs(*it - t) > kTimeEps)
    throw SignalError("time " + format_double(t) + " is not a sample point");
  return static_cast<std::size_t>(it - times_.begin());
}

Signal Signal::with_variable(const std::string& var, std::vector<double> column) const {
  auto names = names_;
  auto cols = columns_;
  names.push_back(var);
  cols.push_back(std::move(column));
  return Signal(times_, std::move(names), std::move(cols));
}

void ConstantStimulus::validate() const {
  if (!(level >= 0.0))
    throw SignalError("stimulus level must be >= 0");
  if (!(hold_duration > 0.0))
    throw SignalError("stimulus hold duration must be > 0");
}

std::vector<double> uniform_grid(double horizon, double step) {
  if (!(step > 0.0))
    throw SignalError("sampling step must be > 0");
  if (!(horizon >= 0.0))
    throw SignalError("horizon must be >= 0");
  auto n = static_cast<std::size_t>(std::floor(horizon / step + 1e-9));
  std::vector<double> t;
  t.reserve(n + 2);
  for (std::size_t i = 0; i <= n; ++i)
    t.push_back(static_cast<double>(i) * step);
  if (horizon - t.back() > kTimeEps)
    t.push_back(horizon);
  else
    t.back() = horizon;
  return t;
}

Signal from_constant(const ConstantStimulus& c, double step, const std::string& var) {
  c.validate();
  auto t = uniform_grid(c.hold_duration, step);
  std::vector<double> col(t.size(), c.level);
  return Signal(std::move(t), {var}, {std::move(col)});
}

void write_csv(std::ostream& os, const Signal& s) {
  os << 't';
  for (const auto& n : s.variables())
    os << ',' << n;
  os << '\n';
  std::vector<std::span<const double>> cols;
  for (const auto& n : s.variables())
    cols.push_back(s.values(n));
  for (std::size_t i = 0; i < s.size(); ++i) {
    os << format_double(s.times()[i]);
    for (auto c : cols)
      os << ',' << format_double(c[i]);
    os << '\n';
  }
}

Signal read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line))
    throw SignalError("empty trace file");
  auto header = split_row(line);
  if (header.empty() || header.front() != "t")
    throw SignalError("trace header must start with 't'");
  std::vector<std::string> names(header.begin() + 1, header.end());
  std::vector<double> times;
  std::vector<std::vector<double>> cols(names.size());
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    auto cells = split_row(line);
    if (cells.size() != header.size())
      throw SignalError("csv line " + std::to_string(lineno) + ": expected " +
                        std::to_string(header.size()) + " fields");
    times.push_back(parse_double(cells[0], lineno));
    for (std::size_t c = 0; c < names.size(); ++c)
      cols[c].push_back(parse_double(cells[c + 1], lineno));
  }
  return Signal(std::move(times), std::move(names), std::move(cols));
}

} // namespace genesynth
