#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "safe/types.hpp"

namespace safe {

// Feature files: UTF-8 CSV, header `id,f0,...,f{m-1}[,label]`.
FeatureMatrix load_feature_matrix(const std::filesystem::path& path);
FeatureMatrix read_feature_matrix(std::istream& in, const std::string& source = "<stream>");
void save_feature_matrix(const FeatureMatrix& x, const std::filesystem::path& path);
void write_feature_matrix(const FeatureMatrix& x, std::ostream& out);

// Parameter tables: CSV, header `id,<param1>,<param2>,...`.
ParameterTable load_parameter_table(const std::filesystem::path& path);
ParameterTable read_parameter_table(std::istream& in, const std::string& source = "<stream>");
void save_parameter_table(const ParameterTable& table, const std::filesystem::path& path);

// Unsafe-value specs: JSON object keyed by parameter name.
UnsafeValueSpec load_unsafe_spec(const std::filesystem::path& path);
UnsafeValueSpec parse_unsafe_spec(const std::string& json_text);
std::string dump_unsafe_spec(const UnsafeValueSpec& spec);
void save_unsafe_spec(const UnsafeValueSpec& spec, const std::filesystem::path& path);

/// Every spec parameter must be a column of the table.
void check_spec_against_table(const UnsafeValueSpec& spec, const ParameterTable& table);

/// 17 significant digits, `%.17g` style.
std::string format_real(double v);

/// Whole-file read; throws Error{kIoFailure}.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace safe
