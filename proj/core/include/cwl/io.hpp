#pragma once

#include <string>

namespace cwl {

// 17-significant-digit decimal rendering; round-trips every finite double.
std::string fmt17(double x);

std::string read_text_file(const std::string& path);               // throws IoError
void write_text_file(const std::string& path, const std::string& content);  // throws IoError

}  // namespace cwl
