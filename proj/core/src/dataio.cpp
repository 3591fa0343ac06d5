#include "safe/dataio.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

#include "csv.hpp"
#include "safe/error.hpp"

namespace safe {
namespace {

using ordered_json = nlohmann::ordered_json;

struct Record {
  std::size_t line_no;
  std::vector<std::string> fields;
};

std::vector<Record> read_records(std::istream& in, const std::string& source) {
  std::vector<Record> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (line.empty()) continue;
    bool ok = true;
    auto fields = csv::split_record(line, ok);
    if (!ok) {
      throw Error(ErrorCode::kParseError,
                  source + ":" + std::to_string(line_no) + ": unterminated quoted field");
    }
    records.push_back({line_no, std::move(fields)});
  }
  if (records.empty()) throw Error(ErrorCode::kEmptyFile, source + ": no header");
  if (records.size() == 1) throw Error(ErrorCode::kEmptyFile, source + ": no data rows");
  return records;
}

std::string where(const std::string& source, std::size_t line_no) {
  return source + ":" + std::to_string(line_no);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot open '" + path.string() + "' for writing");
  return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::kIoFailure, "write to '" + path.string() + "' failed");
}

std::vector<double> json_reals(const ordered_json& node, const std::string& what) {
  if (!node.is_array()) throw Error(ErrorCode::kMalformedRule, what + " must be an array");
  std::vector<double> out;
  for (const auto& v : node) {
    if (!v.is_number()) throw Error(ErrorCode::kMalformedRule, what + " must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  if (ec != std::errc()) throw Error(ErrorCode::kIoFailure, "cannot format real");
  return std::string(buf, ptr);
}

std::string read_text_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  auto out = open_output(path);
  out << contents;
  finish_output(out, path);
}

FeatureMatrix read_feature_matrix(std::istream& in, const std::string& source) {
  auto records = read_records(in, source);
  const auto& header = records.front().fields;
  if (header.empty() || header[0] != "id") {
    throw Error(ErrorCode::kParseError, where(source, records.front().line_no) +
                                            ": header must start with 'id'");
  }
  const bool has_label = header.size() >= 2 && header.back() == "label";
  const std::size_t cols = header.size() - 1 - (has_label ? 1 : 0);
  if (cols == 0) {
    throw Error(ErrorCode::kEmptyFile, where(source, records.front().line_no) + ": no feature columns");
  }
  for (std::size_t j = 0; j < cols; ++j) {
    if (header[j + 1] != "f" + std::to_string(j)) {
      throw Error(ErrorCode::kParseError, where(source, records.front().line_no) + ": column " +
                                              std::to_string(j + 1) + " must be named 'f" +
                                              std::to_string(j) + "', got '" + header[j + 1] + "'");
    }
  }

  std::vector<std::string> ids;
  std::vector<double> values;
  std::optional<std::vector<std::string>> labels;
  if (has_label) labels.emplace();
  ids.reserve(records.size() - 1);
  values.reserve((records.size() - 1) * cols);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields.size() != header.size()) {
      throw Error(ErrorCode::kRaggedRow, where(source, rec.line_no) + ": expected " +
                                             std::to_string(header.size()) + " fields, got " +
                                             std::to_string(rec.fields.size()));
    }
    for (std::size_t j = 0; j < cols; ++j) {
      auto v = csv::parse_real(rec.fields[j + 1]);
      if (!v) {
        throw Error(ErrorCode::kParseError, where(source, rec.line_no) + ": '" +
                                                rec.fields[j + 1] + "' is not a real number");
      }
      if (!std::isfinite(*v)) {
        throw Error(ErrorCode::kNonFiniteValue,
                    where(source, rec.line_no) + ": id '" + rec.fields[0] + "' column f" +
                        std::to_string(j));
      }
      values.push_back(*v);
    }
    if (has_label) labels->push_back(rec.fields.back());
    ids.push_back(rec.fields[0]);
  }
  try {
    return FeatureMatrix(std::move(ids), std::move(values), cols, std::move(labels));
  } catch (const Error& e) {
    throw Error(e.code(), source + ": " + e.what());
  }
}

FeatureMatrix load_feature_matrix(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_feature_matrix(in, path.string());
}

void write_feature_matrix(const FeatureMatrix& x, std::ostream& out) {
  out << "id";
  for (std::size_t j = 0; j < x.cols(); ++j) out << ",f" << j;
  if (x.labels()) out << ",label";
  out << '\n';
  for (std::size_t i = 0; i < x.rows(); ++i) {
    out << csv::escape(x.ids()[i]);
    for (double v : x.row(i)) out << ',' << format_real(v);
    if (x.labels()) out << ',' << csv::escape((*x.labels())[i]);
    out << '\n';
  }
}

void save_feature_matrix(const FeatureMatrix& x, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_feature_matrix(x, out);
  finish_output(out, path);
}

ParameterTable read_parameter_table(std::istream& in, const std::string& source) {
  auto records = read_records(in, source);
  const auto& header = records.front().fields;
  if (header.empty() || header[0] != "id") {
    throw Error(ErrorCode::kParseError, where(source, records.front().line_no) +
                                            ": header must start with 'id'");
  }
  std::vector<std::string> names(header.begin() + 1, header.end());
  std::vector<std::string> ids;
  std::vector<double> values;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields.size() > header.size()) {
      throw Error(ErrorCode::kRaggedRow, where(source, rec.line_no) + ": too many fields");
    }
    for (std::size_t j = 0; j < names.size(); ++j) {
      const std::size_t col = j + 1;
      if (col >= rec.fields.size() || rec.fields[col].empty()) {
        throw Error(ErrorCode::kMissingParameter, where(source, rec.line_no) + ": id '" +
                                                      rec.fields[0] + "' lacks parameter '" +
                                                      names[j] + "'");
      }
      auto v = csv::parse_real(rec.fields[col]);
      if (!v) {
        throw Error(ErrorCode::kParseError, where(source, rec.line_no) + ": '" +
                                                rec.fields[col] + "' is not a real number");
      }
      values.push_back(*v);
    }
    ids.push_back(rec.fields[0]);
  }
  try {
    return ParameterTable(std::move(ids), std::move(names), std::move(values));
  } catch (const Error& e) {
    throw Error(e.code(), source + ": " + e.what());
  }
}

ParameterTable load_parameter_table(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_parameter_table(in, path.string());
}

void save_parameter_table(const ParameterTable& table, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "id";
  for (const auto& name : table.names()) out << ',' << csv::escape(name);
  out << '\n';
  for (std::size_t i = 0; i < table.rows(); ++i) {
    out << csv::escape(table.ids()[i]);
    for (std::size_t j = 0; j < table.names().size(); ++j) out << ',' << format_real(table.value(i, j));
    out << '\n';
  }
  finish_output(out, path);
}

UnsafeValueSpec parse_unsafe_spec(const std::string& json_text) {
  ordered_json root;
  try {
    root = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParseError, std::string("unsafe spec: ") + e.what());
  }
  if (!root.is_object()) throw Error(ErrorCode::kMalformedRule, "unsafe spec must be a JSON object");

  UnsafeValueSpec spec;
  for (const auto& [param, body] : root.items()) {
    if (!body.is_object()) {
      throw Error(ErrorCode::kMalformedRule, "'" + param + "' must map to an object");
    }
    UnsafeEntry entry;
    entry.param = param;
    if (!body.contains("unsafe_values")) {
      throw Error(ErrorCode::kMalformedRule, "'" + param + "' lacks unsafe_values");
    }
    entry.unsafe_values = json_reals(body["unsafe_values"], "'" + param + "'.unsafe_values");
    const std::string rule = body.value("rule", "");
    if (rule == "subrange_fraction") {
      SubrangeFraction sub;
      if (!body.contains("boundaries")) {
        throw Error(ErrorCode::kMalformedRule, "'" + param + "' lacks boundaries");
      }
      sub.boundaries = json_reals(body["boundaries"], "'" + param + "'.boundaries");
      if (body.contains("fraction")) {
        if (!body["fraction"].is_number()) {
          throw Error(ErrorCode::kMalformedRule, "'" + param + "'.fraction must be a number");
        }
        sub.fraction = body["fraction"].get<double>();
      }
      entry.rule = std::move(sub);
    } else if (rule == "at_most") {
      entry.rule = AtMost{};
    } else {
      throw Error(ErrorCode::kMalformedRule,
                  "'" + param + "': rule must be 'subrange_fraction' or 'at_most'");
    }
    spec.entries.push_back(std::move(entry));
  }
  spec.validate();
  return spec;
}

UnsafeValueSpec load_unsafe_spec(const std::filesystem::path& path) {
  return parse_unsafe_spec(read_text_file(path));
}

std::string dump_unsafe_spec(const UnsafeValueSpec& spec) {
  ordered_json root = ordered_json::object();
  for (const auto& entry : spec.entries) {
    ordered_json body;
    body["unsafe_values"] = entry.unsafe_values;
    if (const auto* sub = std::get_if<SubrangeFraction>(&entry.rule)) {
      body["rule"] = "subrange_fraction";
      body["boundaries"] = sub->boundaries;
      body["fraction"] = sub->fraction;
    } else {
      body["rule"] = "at_most";
    }
    root[entry.param] = std::move(body);
  }
  return root.dump(2) + "\n";
}

void save_unsafe_spec(const UnsafeValueSpec& spec, const std::filesystem::path& path) {
  write_text_file(path, dump_unsafe_spec(spec));
}

void check_spec_against_table(const UnsafeValueSpec& spec, const ParameterTable& table) {
  for (const auto& entry : spec.entries) {
    if (!table.param_index(entry.param)) {
      throw Error(ErrorCode::kUnknownParameter,
                  "spec parameter '" + entry.param + "' is not a column of the parameter table");
    }
  }
}

}  // namespace safe
