/**
 * @file suites.hpp
 * @brief Randomised property suites over the library, shared by the command
 *        line front end and the acceptance runner.
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gmap4 {

struct SuiteCheck {
  std::string name;
  bool passed = true;
  double worst = 0;       // largest observed residual (or mismatches for counts)
  double threshold = 0;   // bound the residual is compared against
  std::size_t count = 0;  // evaluations performed
  std::string note;
};

struct SuiteResult {
  std::string suite;
  std::vector<SuiteCheck> checks;
  bool passed() const;
};

struct SuiteOptions {
  std::uint64_t seed = 20260101;
  int planes = 1000;          // plucker
  int surfaces = 50;          // blaschke
  int pointsPerSurface = 9;   // blaschke
  double blaschkeStep = 1e-4;
  double blaschkeTol = 1e-5;
  int rotationPairs = 100;    // lift
  int alphas = 100;           // lift
  int gradientGraphs = 20;    // lagrangean
  int wongSurfaces = 20;      // random surfaces added to the fixed wong set
  int closednessSurfaces = 5; // gradient graphs checked for closedness besides Example 1
  int closednessPoints = 25;
  int isoclinicPlanes = 50;
  int isosupPlanes = 200;
};

SuiteResult plucker_suite(const SuiteOptions& opt = {});
SuiteResult blaschke_suite(const SuiteOptions& opt = {});
SuiteResult wong_suite(const SuiteOptions& opt = {});
SuiteResult lagrangean_suite(const SuiteOptions& opt = {});
SuiteResult lift_suite(const SuiteOptions& opt = {});

const std::vector<std::string>& suite_names();
/// Throws InputError for an unknown name.
SuiteResult run_suite(const std::string& name, const SuiteOptions& opt = {});

}  // namespace gmap4
