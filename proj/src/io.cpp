#include "bpqr/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "bpqr/errors.hpp"

namespace bpqr {

namespace {

using Eigen::Index;

Index idx(std::size_t v) { return static_cast<Index>(v); }

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_double(const std::string& text, double& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool parse_long(const std::string& text, long& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  return ec == std::errc() && ptr == t.data() + t.size();
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return in;
}

std::string where(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string format_quantile(double p) {
  std::ostringstream ss;
  ss << std::setprecision(6) << p;
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

PanelData ingest_panel_csv(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": file is empty");
  std::vector<std::string> header = split_csv_line(line);
  for (auto& h : header) h = trim(h);
  if (header.size() < 3 || header[0] != "id" || header[1] != "t" || header[2] != "y") {
    throw DataError(where(path, 1) + ": header must start with id,t,y");
  }
  const std::size_t ncov = header.size() - 3;
  {
    std::set<std::string> seen;
    for (std::size_t c = 3; c < header.size(); ++c) {
      if (header[c].empty() || !seen.insert(header[c]).second) {
        throw DataError(where(path, 1) + ": covariate names must be non-empty and unique");
      }
    }
  }

  PanelData data;
  data.column_names.push_back("(Intercept)");
  data.column_names.insert(data.column_names.end(), header.begin() + 3, header.end());

  std::vector<double> values;
  std::set<std::string> finished_ids;
  std::string current_id;
  long last_t = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw DataError(where(path, line_no) + ": expected " + std::to_string(header.size()) +
                      " fields, found " + std::to_string(cells.size()));
    }
    const std::string id = trim(cells[0]);
    if (id.empty()) throw DataError(where(path, line_no) + ": empty id");
    long t = 0;
    if (!parse_long(cells[1], t)) {
      throw DataError(where(path, line_no) + ", column t: '" + cells[1] + "' is not an integer");
    }
    long yv = 0;
    if (!parse_long(cells[2], yv) || (yv != 0 && yv != 1)) {
      throw DataError(where(path, line_no) + ", column y: outcome must be 0 or 1, got '" +
                      trim(cells[2]) + "'");
    }

    if (data.ids.empty() || id != current_id) {
      if (finished_ids.count(id) != 0) {
        throw DataError(where(path, line_no) + ": rows for id '" + id +
                        "' are not contiguous");
      }
      if (!data.ids.empty()) {
        finished_ids.insert(current_id);
        data.offsets.push_back(data.y.size());
      }
      data.ids.push_back(id);
      current_id = id;
    } else if (t == last_t) {
      throw DataError(where(path, line_no) + ": duplicate (id, t) = (" + id + ", " +
                      std::to_string(t) + ")");
    } else if (t < last_t) {
      throw DataError(where(path, line_no) + ": t must increase within id '" + id + "'");
    }
    last_t = t;

    data.periods.push_back(t);
    data.y.push_back(static_cast<std::uint8_t>(yv));
    values.push_back(1.0);
    for (std::size_t c = 3; c < cells.size(); ++c) {
      double v = 0.0;
      if (!parse_double(cells[c], v) || !std::isfinite(v)) {
        throw DataError(where(path, line_no) + ", column " + header[c] + ": '" + trim(cells[c]) +
                        "' is not a finite number");
      }
      values.push_back(v);
    }
  }
  if (data.y.empty()) throw DataError(path.string() + ": no observations");
  data.offsets.push_back(data.y.size());

  data.x = Eigen::Map<const RowMatrix>(values.data(), idx(data.y.size()), idx(ncov + 1));
  data.mundlak_cols = all_non_intercept(data);
  compute_mundlak_means(data);
  return data;
}

void write_panel_csv(const std::filesystem::path& path, const PanelData& data) {
  std::ostringstream out;
  out << "id,t,y";
  for (std::size_t c = 1; c < data.column_names.size(); ++c) out << ',' << data.column_names[c];
  out << '\n';
  for (std::size_t i = 0; i < data.num_individuals(); ++i) {
    for (std::size_t r = data.begin(i); r < data.end(i); ++r) {
      const long t = r < data.periods.size() ? data.periods[r] : static_cast<long>(r - data.begin(i) + 1);
      out << data.ids[i] << ',' << t << ',' << static_cast<int>(data.y[r]);
      for (Index c = 1; c < data.x.cols(); ++c) out << ',' << format_double(data.x(idx(r), c));
      out << '\n';
    }
  }
  write_text_file(path, out.str());
}

void select_mundlak(PanelData& data, const std::vector<std::string>& names) {
  std::vector<std::size_t> cols;
  for (const auto& name : names) {
    const std::size_t c = data.column_index(name);
    if (c == 0) throw ConfigError("the intercept cannot enter the Mundlak means");
    cols.push_back(c);
  }
  data.mundlak_cols = std::move(cols);
  compute_mundlak_means(data);
}

void demean_column(PanelData& data, const std::string& name) {
  const std::size_t c = data.column_index(name);
  if (c == 0) throw ConfigError("cannot demean the intercept");
  auto col = data.x.col(idx(c));
  col.array() -= col.mean();
  compute_mundlak_means(data);
}

void scale_column(PanelData& data, const std::string& name, double factor) {
  const std::size_t c = data.column_index(name);
  if (c == 0) throw ConfigError("cannot scale the intercept");
  if (!(factor != 0.0) || !std::isfinite(factor)) throw ConfigError("scale factor must be finite and non-zero");
  data.x.col(idx(c)) /= factor;
  compute_mundlak_means(data);
}

Index CsvTable::find(const std::string& name) const {
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == name) return idx(c);
  }
  return -1;
}

CsvTable read_numeric_csv(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": file is empty");
  CsvTable table;
  table.header = split_csv_line(line);
  for (auto& h : table.header) h = trim(h);
  const std::size_t cols = table.header.size();
  std::vector<double> values;
  std::size_t line_no = 1;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != cols) {
      throw DataError(where(path, line_no) + ": expected " + std::to_string(cols) +
                      " fields, found " + std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      double v = 0.0;
      if (!parse_double(cells[c], v)) {
        throw DataError(where(path, line_no) + ", column " + table.header[c] + ": '" +
                        trim(cells[c]) + "' is not a number");
      }
      values.push_back(v);
    }
    ++rows;
  }
  table.values = Eigen::Map<const RowMatrix>(values.data(), idx(rows), idx(cols));
  return table;
}

void write_draws_csv(const std::filesystem::path& path, const PosteriorDraws& draws) {
  std::ostringstream out;
  std::vector<std::string> names = draws.parameter_names();
  for (Index i = 0; i < draws.alpha.cols(); ++i) names.push_back("alpha_" + std::to_string(i + 1));
  for (std::size_t c = 0; c < names.size(); ++c) out << (c ? "," : "") << names[c];
  out << '\n';
  const Eigen::MatrixXd params = draws.parameter_matrix();
  for (Index r = 0; r < draws.size(); ++r) {
    for (Index c = 0; c < params.cols(); ++c) out << (c ? "," : "") << format_double(params(r, c));
    for (Index c = 0; c < draws.alpha.cols(); ++c) out << ',' << format_double(draws.alpha(r, c));
    out << '\n';
  }
  write_text_file(path, out.str());
}

PosteriorDraws read_draws_csv(const std::filesystem::path& path, double p) {
  const CsvTable table = read_numeric_csv(path);
  std::vector<Index> beta_cols, zeta_cols, alpha_cols;
  Index sigma_col = -1;
  PosteriorDraws draws;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    const std::string& h = table.header[c];
    if (h.rfind("beta_", 0) == 0) {
      beta_cols.push_back(idx(c));
      draws.beta_names.push_back(h);
    } else if (h.rfind("zeta_", 0) == 0) {
      zeta_cols.push_back(idx(c));
      draws.zeta_names.push_back(h);
    } else if (h.rfind("alpha_", 0) == 0) {
      alpha_cols.push_back(idx(c));
    } else if (h == "sigma_alpha2") {
      sigma_col = idx(c);
    } else {
      throw DataError(path.string() + ":1: unexpected column '" + h + "'");
    }
  }
  if (beta_cols.empty() || sigma_col < 0) {
    throw DataError(path.string() + ":1: draws file needs beta_* and sigma_alpha2 columns");
  }
  draws.beta = table.values(Eigen::all, beta_cols);
  draws.zeta = table.values(Eigen::all, zeta_cols);
  draws.sigma_alpha_sq = table.values.col(sigma_col);
  if (!alpha_cols.empty()) draws.alpha = table.values(Eigen::all, alpha_cols);
  draws.p = p;
  return draws;
}

void write_summary_csv(const std::filesystem::path& path, const ChainSummary& summary) {
  std::ostringstream out;
  out << "parameter,mean,std,hpdi_lo,hpdi_hi,if,geweke_z,acf1,acf5,acf10\n";
  for (const ParameterSummary& s : summary) {
    out << s.name << ',' << format_double(s.mean) << ',' << format_double(s.std) << ','
        << format_double(s.hpdi.lower) << ',' << format_double(s.hpdi.upper) << ','
        << format_double(s.inefficiency) << ',' << format_double(s.geweke_z) << ','
        << format_double(s.acf1) << ',' << format_double(s.acf5) << ','
        << format_double(s.acf10) << '\n';
  }
  write_text_file(path, out.str());
}

namespace {

nlohmann::json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

void write_summary_json(const std::filesystem::path& path, const ChainSummary& summary) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ParameterSummary& s : summary) {
    rows.push_back({{"parameter", s.name},
                    {"mean", number_or_null(s.mean)},
                    {"std", number_or_null(s.std)},
                    {"median", number_or_null(s.median)},
                    {"hpdi_lo", number_or_null(s.hpdi.lower)},
                    {"hpdi_hi", number_or_null(s.hpdi.upper)},
                    {"if", number_or_null(s.inefficiency)},
                    {"if_degenerate", s.inefficiency_degenerate},
                    {"geweke_z", number_or_null(s.geweke_z)},
                    {"acf1", number_or_null(s.acf1)},
                    {"acf5", number_or_null(s.acf5)},
                    {"acf10", number_or_null(s.acf10)}});
  }
  write_text_file(path, nlohmann::json{{"parameters", rows}}.dump(2) + "\n");
}

}  // namespace bpqr
