#pragma once

#include <string>

namespace poqsim {

// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);

// Quotes a CSV field when it contains a comma, quote, or newline.
std::string csv_escape(const std::string& v);

}  // namespace poqsim
