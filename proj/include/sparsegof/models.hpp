#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sparsegof/corrections.hpp"
#include "sparsegof/count_vector.hpp"
#include "sparsegof/prob_vector.hpp"
#include "sparsegof/tables.hpp"

namespace sparsegof {

// Fully specified multinomial null: s = 0, df = R - 1.
struct SimpleNull {
  ProbVector p0;
};

// 2D independence null: s = (I-1) + (J-1), df = (I-1)(J-1).
struct Independence2D {};

struct FittedNull {
  ProbVector p_star0;
  int s = 0;
  int df = 0;
};

FittedNull fit_null(const SimpleNull& model, const CountVector& counts);
FittedNull fit_null(Independence2D model, const ContingencyTable& table);

struct CorrectionConfig {
  double h = 0.1;
  EpsPolicy eps_policy;
};

struct TestReport {
  std::int64_t n = 0;
  int R = 0;
  int c = 0;
  int s = 0;
  int df = 0;
  double alpha = 0.0;
  double threshold = 0.0;

  double q = 0.0;
  double g = 0.0;
  double rc23 = 0.0;
  double q_ab = 0.0;
  double g_ab = 0.0;
  double g_ku = 0.0;

  bool reject_q = false;
  bool reject_g = false;
  bool reject_rc23 = false;
  bool reject_q_ab = false;
  bool reject_g_ab = false;
  bool reject_g_ku = false;
  bool combined_reject = false; // Q^ab or G^ab rejects

  CorrectionParams correction;
  std::vector<std::string> warnings;
};

TestReport run_test(const CountVector& counts, const FittedNull& null,
                    double alpha, const CorrectionConfig& config = {});
TestReport run_test(const CountVector& counts, const SimpleNull& model,
                    double alpha, const CorrectionConfig& config = {});
TestReport run_test(const ContingencyTable& table, Independence2D model,
                    double alpha, const CorrectionConfig& config = {});

} // namespace sparsegof
