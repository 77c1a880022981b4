#pragma once

#include <string>

namespace qbl {

void set_quiet(bool q);
bool quiet();

// Warnings go to stderr unless quiet. Each distinct message is printed once.
void warn(const std::string& msg);
void info(const std::string& msg);

}  // namespace qbl
