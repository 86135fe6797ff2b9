#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "besov/grid.hpp"

namespace besov {

// Header {d, N, L, value_dim, domain_tag} plus "data": interleaved re/im, node-major.
nlohmann::json grid_function_to_json(const GridFunction& f);
GridFunction grid_function_from_json(const nlohmann::json& j);

// Columns x,re,im; only for one-dimensional scalar functions.
std::string grid_function_to_csv(const GridFunction& f);

nlohmann::json grid_to_json(const GridSpec& grid);
GridSpec grid_from_json(const nlohmann::json& j);

// Writes through a sibling temporary file and renames it into place.
void atomic_write(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

// Stable text form used for every report: two-space indent, trailing newline.
std::string dump_json(const nlohmann::json& j);

}  // namespace besov
