#include "mee/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "json.hpp"

namespace mee {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_cell(const std::string& cell, const std::string& name,
                  std::size_t line, std::size_t col) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    if (cell == "inf") return std::numeric_limits<double>::infinity();
    if (cell == "-inf") return -std::numeric_limits<double>::infinity();
    if (cell == "nan") return std::numeric_limits<double>::quiet_NaN();
    std::ostringstream msg;
    msg << name << ": line " << line << ", column " << col << ": '" << cell
        << "' is not a number";
    fail(ErrorKind::Parse, "csv", msg.str());
  }
  return v;
}

bool indexed_name(const std::string& cell, const char* prefix, std::size_t want) {
  std::string expect = std::string(prefix) + "_" + std::to_string(want);
  return cell == expect;
}

}  // namespace

Sample parse_dataset_csv(std::istream& in, const std::string& name) {
  std::string line;
  if (!std::getline(in, line))
    fail(ErrorKind::Parse, "csv", name + ": empty input");
  auto header = split_csv_line(line);
  std::size_t d = 0;
  while (d < header.size() && indexed_name(header[d], "x", d + 1)) ++d;
  std::size_t p = 0;
  while (d + p < header.size() && indexed_name(header[d + p], "y", p + 1)) ++p;
  if (d == 0 || p == 0 || d + p != header.size())
    fail(ErrorKind::Parse, "csv",
         name + ": header must be x_1,...,x_d,y_1,...,y_p");

  std::vector<double> x;
  std::vector<CovariatePoint> ys;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != d + p) {
      std::ostringstream msg;
      msg << name << ": line " << lineno << ": expected " << d + p
          << " fields, got " << cells.size();
      fail(ErrorKind::Parse, "csv", msg.str());
    }
    for (std::size_t j = 0; j < d; ++j)
      x.push_back(parse_cell(cells[j], name, lineno, j + 1));
    CovariatePoint y;
    y.values.reserve(p);
    for (std::size_t j = 0; j < p; ++j)
      y.values.push_back(parse_cell(cells[d + j], name, lineno, d + j + 1));
    ys.push_back(std::move(y));
  }
  if (ys.empty()) fail(ErrorKind::Parse, "csv", name + ": no data rows");
  const std::size_t n = ys.size();
  return Sample::make(n, d, std::move(x), std::move(ys));
}

Sample read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Parse, "csv", "cannot open " + path);
  return parse_dataset_csv(in, path);
}

void write_dataset_csv(const Sample& s, std::ostream& out) {
  s.validate("csv");
  const std::size_t p = s.y.front().grid_size();
  for (std::size_t j = 0; j < s.d; ++j) out << "x_" << j + 1 << ",";
  for (std::size_t j = 0; j < p; ++j)
    out << "y_" << j + 1 << (j + 1 < p ? "," : "\n");
  for (std::size_t i = 0; i < s.n; ++i) {
    for (std::size_t j = 0; j < s.d; ++j)
      out << format_double(s.xat(i, j)) << ",";
    for (std::size_t j = 0; j < p; ++j)
      out << format_double(s.y[i].values[j]) << (j + 1 < p ? "," : "\n");
  }
}

void write_dataset_csv(const Sample& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Parse, "csv", "cannot open " + path + " for writing");
  write_dataset_csv(s, out);
}

std::vector<std::string> result_row_columns(std::size_t d) {
  std::vector<std::string> cols = {"n", "rep", "seed", "gamma_hat"};
  for (std::size_t j = 1; j <= d; ++j) cols.push_back("c_hat_" + std::to_string(j));
  cols.push_back("eta_hat");
  for (std::size_t j = 2; j <= d; ++j)
    cols.push_back("beta_hat_" + std::to_string(j));
  cols.push_back("eta_star");
  for (std::size_t j = 2; j <= d; ++j)
    cols.push_back("beta_star_" + std::to_string(j));
  cols.push_back("l1_error");
  for (std::size_t j = 1; j <= d; ++j)
    cols.push_back("expectile_" + std::to_string(j));
  cols.push_back("rate_combined");
  cols.push_back("wall_time_ms");
  cols.push_back("converged");
  cols.push_back("error");
  return cols;
}

namespace {

void put_opt(std::ostream& out, const std::optional<double>& v) {
  if (v) out << format_double(*v);
  out << ",";
}

void put_vec(std::ostream& out, const std::vector<double>& v, std::size_t want) {
  for (std::size_t j = 0; j < want; ++j) {
    if (j < v.size()) out << format_double(v[j]);
    out << ",";
  }
}

void put_theta(std::ostream& out, const std::optional<ThetaVector>& t,
               std::size_t d) {
  if (t)
    put_vec(out, t->as_vector(), d);
  else
    put_vec(out, {}, d);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

}  // namespace

void write_result_rows_csv(const std::vector<ResultRow>& rows, std::size_t d,
                           std::ostream& out) {
  auto cols = result_row_columns(d);
  for (std::size_t j = 0; j < cols.size(); ++j)
    out << cols[j] << (j + 1 < cols.size() ? "," : "\n");
  for (const auto& r : rows) {
    out << r.n << "," << r.rep << "," << r.seed << ",";
    put_opt(out, r.gamma_hat);
    put_vec(out, r.c_hat, d);
    put_theta(out, r.theta_hat, d);
    put_theta(out, r.theta_star, d);
    put_opt(out, r.l1_error);
    put_vec(out, r.expectile, d);
    put_opt(out, r.rate_combined);
    out << format_double(r.wall_time_ms) << ",";
    out << (r.converged ? "1" : "0") << ",";
    out << csv_escape(r.error) << "\n";
  }
}

void write_result_rows_csv(const std::vector<ResultRow>& rows, std::size_t d,
                           const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Parse, "csv", "cannot open " + path + " for writing");
  write_result_rows_csv(rows, d, out);
}

namespace {

json theta_to_json(const ThetaVector& t) {
  return json{{"eta", t.eta}, {"beta", t.beta}};
}

json rates_to_json(const RatePlan& r) {
  return json{{"delta0", r.delta0},
              {"delta_minus1", r.delta_minus1},
              {"delta_gamma", r.delta_gamma},
              {"combined", r.combined}};
}

}  // namespace

std::string mee_result_to_json(const MEEResult& r) {
  json j{{"theta", theta_to_json(r.theta)},
         {"gamma", r.gamma},
         {"c", r.c},
         {"expectile", r.expectile},
         {"q1", r.q1},
         {"h", r.h},
         {"psi", r.psi},
         {"kn", r.kn},
         {"alpha_n", r.alpha_n},
         {"loss", r.loss},
         {"optimizer",
          json{{"f", r.optimizer.f},
               {"pg_norm", r.optimizer.pg_norm},
               {"iterations", r.optimizer.iterations},
               {"fevals", r.optimizer.fevals},
               {"gevals", r.optimizer.gevals},
               {"restarts_used", r.optimizer.restarts_used},
               {"converged", r.optimizer.converged}}},
         {"distinct_minima", r.distinct_minima},
         {"rates", rates_to_json(r.rates)},
         {"warnings", r.warnings}};
  return j.dump(2);
}

std::string rate_plan_to_json(const RatePlan& r) { return rates_to_json(r).dump(2); }

namespace {

MarginalFamily margin_from_json(const json& j, const std::string& name) {
  if (!j.is_object())
    fail(ErrorKind::Parse, "config", name + ": margin must be an object");
  std::string family = j.value("family", "lomax");
  if (family == "lomax")
    return MarginalFamily::lomax(j.value("gamma", 0.5), j.value("scale", 1.0));
  if (family == "burr")
    return MarginalFamily::burr(j.value("tau", 1.0), j.value("lam", 2.0));
  if (family == "frechet") return MarginalFamily::frechet(j.value("gamma", 0.5));
  if (family == "hall_weiss")
    return MarginalFamily::hall_weiss(j.value("alpha", 2.0), j.value("rho", -1.0));
  fail(ErrorKind::Parse, "config", name + ": unknown marginal family '" + family + "'");
}

ConditionalModel model_from_json(const json& j, const std::string& name) {
  if (!j.is_object())
    fail(ErrorKind::Parse, "config", name + ": model must be an object");
  ConditionalModel m;
  m.d = j.value("d", static_cast<std::size_t>(2));
  if (j.contains("margins")) {
    const json& mj = j.at("margins");
    if (mj.is_array()) {
      for (const auto& item : mj) m.margins.push_back(margin_from_json(item, name));
    } else {
      m.margins.assign(m.d, margin_from_json(mj, name));
    }
  } else {
    m.margins.assign(m.d, MarginalFamily::lomax(0.5, 1.0));
  }
  if (j.contains("gamma_link")) {
    const json& g = j.at("gamma_link");
    m.gamma_link.g0 = g.value("g0", 0.5);
    m.gamma_link.g1 = g.value("g1", 0.0);
    m.gamma_link.clip_lo = g.value("clip_lo", 0.2);
    m.gamma_link.clip_hi = g.value("clip_hi", 0.8);
  }
  if (j.contains("copula")) {
    const json& c = j.at("copula");
    std::string kind = c.value("kind", "independence");
    if (kind == "independence")
      m.copula.kind = CopulaKind::Independence;
    else if (kind == "comonotone")
      m.copula.kind = CopulaKind::Comonotone;
    else if (kind == "survival_clayton")
      m.copula.kind = CopulaKind::SurvivalClayton;
    else
      fail(ErrorKind::Parse, "config", name + ": unknown copula kind '" + kind + "'");
    m.copula.theta0 = c.value("theta0", 1.0);
    m.copula.theta1 = c.value("theta1", 0.0);
  }
  if (j.contains("covariate")) {
    const json& c = j.at("covariate");
    std::string kind = c.value("kind", "constant");
    if (kind == "constant")
      m.covariate.kind = CovariateKind::Constant;
    else if (kind == "fourier")
      m.covariate.kind = CovariateKind::Fourier;
    else
      fail(ErrorKind::Parse, "config",
           name + ": unknown covariate kind '" + kind + "'");
    m.covariate.grid_size = c.value("grid_size", static_cast<std::size_t>(100));
    m.covariate.value = c.value("value", 0.0);
  }
  m.validate("config");
  return m;
}

}  // namespace

ConditionalModel model_from_json_text(const std::string& text,
                                      const std::string& name) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    fail(ErrorKind::Parse, "config", name + ": invalid JSON");
  try {
    return model_from_json(j, name);
  } catch (const json::exception& e) {
    fail(ErrorKind::Parse, "config", name + ": " + e.what());
  }
}

ConditionalModel model_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Parse, "config", "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json_text(buf.str(), path);
}

}  // namespace mee
