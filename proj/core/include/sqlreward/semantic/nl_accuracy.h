#pragma once

#include <string_view>

#include "sqlreward/semantic/embedding.h"

namespace sqlreward::semantic {

struct NlAccThresholds {
  double hi = 0.96;
  double lo = 0.90;
  double mid_scale = 0.8;

  // Throws InvalidArgument unless 0 <= lo < hi <= 1 and 0 < mid_scale <= 1.
  void validate() const;
};

// Step function on a similarity: rho above hi, mid_scale * rho between lo
// and hi, otherwise 0.
double nl_step(double rho, const NlAccThresholds& th = {});

// Accuracy of a natural-language answer against the gold answer.
double r_acc_nl(std::string_view pred_text, std::string_view gold_text, const EmbeddingProvider& provider,
                const NlAccThresholds& th = {});

}  // namespace sqlreward::semantic
