#pragma once

#include <ostream>
#include <string>

#include "commands.hpp"

namespace scales::cli {

// %.17g for finite doubles, null otherwise.
std::string format_number(double v);

// Indented JSON with sorted keys and 17 significant digits per float.
void write_json(const json& value, std::ostream& out);

void write_csv(const Table& table, std::ostream& out);

}  // namespace scales::cli
