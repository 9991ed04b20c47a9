#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qnr/linalg.hpp"

namespace qnr {

struct CampaignConfig {
  Seed seed{42};
  std::vector<std::size_t> dims{2, 3, 4, 5, 6};
  std::vector<double> q_grid{0.1, 0.3, 0.5, 0.7, 0.9, 1.0};
  int trials = 40;                  // matrices per dimension
  std::vector<std::string> bounds;  // empty: whole catalog
  std::vector<std::string> phis{"power:2", "exp_minus_one", "power_over_p:2"};
  std::string output;               // report path, empty for none
  int restarts = 32;
  int sampler_trials = 1000;
  int directions = 64;              // polygon directions for sectorial instances
};

// Throws InvalidConfig.
void validate(const CampaignConfig& cfg);
nlohmann::json config_to_json(const CampaignConfig& cfg);
CampaignConfig config_from_json(const nlohmann::json& j);

struct CampaignRow {
  std::string bound_id;
  std::string phi;  // empty for bounds without an Orlicz function
  int trials = 0;   // evaluated outcomes
  int violations = 0;
  int warnings = 0;
  int skipped = 0;  // predicate unmet or instance unavailable
  double min_slack = std::numeric_limits<double>::infinity();  // smallest relative slack
  double mean_tightness = std::numeric_limits<double>::quiet_NaN();
};

struct CampaignReport {
  std::string generated_at;
  CampaignConfig config;
  std::vector<CampaignRow> rows;  // catalog order, then phi order
  int outcomes = 0;
  int violations = 0;
  int warnings = 0;
};

CampaignReport run_campaign(const CampaignConfig& cfg);
nlohmann::json report_to_json(const CampaignReport& report);
void write_report(const CampaignReport& report, const std::string& path);

struct FigureData {
  std::string figure_id;
  std::string grid_name;
  std::vector<double> grid;
  std::vector<std::pair<std::string, std::vector<double>>> columns;
};

// fig1, fig4, fig5, fig6; throws UnknownFigure.
FigureData figure_data(std::string_view figure_id);
std::vector<std::string> figure_ids();

// Header row, then grid and columns at 17 significant digits.
std::string figure_to_csv(const FigureData& fig);
FigureData figure_from_csv(std::string_view figure_id, std::string_view text);

// Number of strict sign changes of a - b along the grid; zeros are skipped.
int sign_changes(std::span<const double> a, std::span<const double> b);

// Root of cos(a)(1 + sin(a)) - 1 on (0, pi/2).
double fig4_crossover();

struct RegressionEntry {
  std::string name;
  double expected = 0.0;
  double actual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct RegressionReport {
  std::vector<RegressionEntry> entries;
  bool all_passed = false;
};

RegressionReport worked_examples_regression();
nlohmann::json regression_to_json(const RegressionReport& report);

// Fixed worked-example matrices.
ComplexMatrix example_a1();
ComplexMatrix example_a2();
ComplexMatrix example_randn();
ComplexMatrix jordan_block();

}  // namespace qnr
