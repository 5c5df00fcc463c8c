#include "spl/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace spl {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& s, const std::string& context) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(context + ": cannot parse number '" + s + "'");
  }
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

std::string read_line_trimmed(std::istream& in) {
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

Dataset load_dataset_csv(const std::string& path) {
  auto in = open_input(path);
  const std::string header = read_line_trimmed(in);
  const auto columns = split_csv_line(header);
  if (columns.size() < 2 || columns.back() != "y") {
    throw std::runtime_error(path + ": expected header x1..xD,y");
  }
  const std::size_t dim = columns.size() - 1;
  for (std::size_t j = 0; j < dim; ++j) {
    if (columns[j] != "x" + std::to_string(j + 1)) {
      throw std::runtime_error(path + ": expected header x1..xD,y");
    }
  }
  std::vector<std::vector<double>> rows;
  while (in) {
    const std::string line = read_line_trimmed(in);
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != columns.size()) {
      throw std::runtime_error(path + ": row has " + std::to_string(fields.size()) +
                               " fields, expected " + std::to_string(columns.size()));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_double(f, path));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(path + ": no data rows");
  Eigen::MatrixXd x(rows.size(), dim);
  Eigen::VectorXd y(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < dim; ++j) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    y[static_cast<Eigen::Index>(i)] = rows[i][dim];
  }
  return {std::move(x), std::move(y)};
}

void save_dataset_csv(const Dataset& dataset, const std::string& path) {
  auto out = open_output(path);
  for (Eigen::Index j = 0; j < dataset.dim(); ++j) out << "x" << (j + 1) << ",";
  out << "y\n";
  for (Eigen::Index i = 0; i < dataset.size(); ++i) {
    for (Eigen::Index j = 0; j < dataset.dim(); ++j) {
      out << format_double(dataset.features()(i, j)) << ",";
    }
    out << format_double(dataset.targets()[i]) << "\n";
  }
}

Regularizer load_tabulated_csv(double pace, const std::string& path) {
  auto in = open_input(path);
  const std::string header = read_line_trimmed(in);
  if (header != "l,v") throw std::runtime_error(path + ": expected header l,v");
  std::vector<double> ls, vs;
  while (in) {
    const std::string line = read_line_trimmed(in);
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 2) throw std::runtime_error(path + ": expected two columns");
    ls.push_back(parse_double(fields[0], path));
    vs.push_back(parse_double(fields[1], path));
  }
  return Regularizer::tabulated(pace, std::move(ls), std::move(vs));
}

void save_trace_csv(const IterateTrace& trace, const std::string& path) {
  auto out = open_output(path);
  out << "k,E,G,U,grad_norm,eps_k,r_k,step_norm,inner_iters\n";
  for (const auto& r : trace.rows) {
    out << r.k << "," << format_double(r.explicit_obj) << "," << format_double(r.implicit_obj)
        << "," << format_double(r.surrogate_obj) << "," << format_double(r.grad_norm) << ","
        << format_double(r.eps) << "," << format_double(r.tail) << ","
        << format_double(r.step_norm) << "," << r.inner_iters << "\n";
  }
}

IterateTrace load_trace_csv(const std::string& path) {
  auto in = open_input(path);
  const std::string header = read_line_trimmed(in);
  if (header != "k,E,G,U,grad_norm,eps_k,r_k,step_norm,inner_iters") {
    throw std::runtime_error(path + ": unexpected trace header");
  }
  IterateTrace trace;
  while (in) {
    const std::string line = read_line_trimmed(in);
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 9) throw std::runtime_error(path + ": expected 9 columns");
    TraceRow row;
    row.k = static_cast<int>(parse_double(fields[0], path));
    row.explicit_obj = parse_double(fields[1], path);
    row.implicit_obj = parse_double(fields[2], path);
    row.surrogate_obj = parse_double(fields[3], path);
    row.grad_norm = parse_double(fields[4], path);
    row.eps = parse_double(fields[5], path);
    row.tail = parse_double(fields[6], path);
    row.step_norm = parse_double(fields[7], path);
    row.inner_iters = static_cast<int>(parse_double(fields[8], path));
    trace.rows.push_back(row);
  }
  if (trace.rows.empty()) throw std::runtime_error(path + ": no trace rows");
  for (const auto& r : trace.rows) {
    if (r.eps != 0.0 || r.tail != 0.0) {
      trace.has_error_schedule = true;
      break;
    }
  }
  return trace;
}

nlohmann::json trace_summary_json(const IterateTrace& trace) {
  return {{"iters", trace.iterations()},
          {"converged", trace.converged},
          {"final_G", trace.rows.back().implicit_obj},
          {"final_grad_norm", trace.final_grad_norm()}};
}

void save_trace_summary(const IterateTrace& trace, const std::string& path) {
  write_json_file(trace_summary_json(trace), path);
}

nlohmann::json condition_report_json(const ConditionReport& report) {
  return {{"condition1", report.condition1},
          {"condition2", report.condition2},
          {"condition3", report.condition3},
          {"worst_margins",
           {{"condition1", report.margin1},
            {"condition2", report.margin2},
            {"condition3", report.margin3}}},
          {"notes", report.notes}};
}

nlohmann::json certification_report_json(const CertificationReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    nlohmann::json item = {{"name", c.name},
                           {"passed", c.passed},
                           {"worst_margin", std::isfinite(c.worst_margin) ? c.worst_margin : 0.0},
                           {"location", c.location}};
    if (c.skipped) item["skipped"] = true;
    if (c.informational) item["informational"] = true;
    if (!c.note.empty()) item["note"] = c.note;
    checks.push_back(std::move(item));
  }
  return {{"checks", std::move(checks)},
          {"verdict", report.verdict()},
          {"assumptions", report.assumptions}};
}

void write_json_file(const nlohmann::json& value, const std::string& path) {
  auto out = open_output(path);
  out << value.dump(2) << "\n";
}

nlohmann::json read_json_file(const std::string& path) {
  auto in = open_input(path);
  nlohmann::json value;
  in >> value;
  return value;
}

}  // namespace spl
