#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "config.hpp"

namespace gpbog::cli {

struct Output {
  json doc = json::object();
  std::vector<std::string> header;
  std::vector<std::vector<CsvWriter::Cell>> rows;
  Format preferred = Format::json;
};

using Command = std::function<Output(const RunConfig&)>;

/// Subcommand name → implementation, with a one-line description for --help.
const std::map<std::string, std::pair<std::string, Command>>& commands();

}  // namespace gpbog::cli
