#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fbmruin/montecarlo.hpp"

namespace fbmruin::cli {

using nlohmann::json;

/// Rounds to 12 significant digits; non-finite values become null.
json number(double v);
/// %.12g, with non-finite values spelled nan / inf / -inf.
std::string csv_number(double v);

/// Minimal CSV table: header plus rows of already formatted cells.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string str() const;
};

/// Two side-by-side line charts: N vs MC/asymptotic ratio, and N vs
/// -log(p)/N with the reference rate dashed.
std::string convergence_svg(const std::vector<ConvergenceRow>& rows, const std::string& title);

}  // namespace fbmruin::cli
