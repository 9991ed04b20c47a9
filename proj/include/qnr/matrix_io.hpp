#pragma once

#include <string>
#include <string_view>

#include "qnr/linalg.hpp"

namespace qnr {

// {"dim": n, "entries": [[re, im], ...]} in row-major order.
ComplexMatrix parse_matrix_json(std::string_view text);
std::string matrix_to_json(const ComplexMatrix& a);

ComplexMatrix load_matrix(const std::string& path);
void save_matrix(const ComplexMatrix& a, const std::string& path);

}  // namespace qnr
