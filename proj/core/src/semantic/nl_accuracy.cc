#include "sqlreward/semantic/nl_accuracy.h"

#include "sqlreward/error.h"

namespace sqlreward::semantic {

void NlAccThresholds::validate() const {
  if (!(0.0 <= lo && lo < hi && hi <= 1.0)) {
    throw InvalidArgument("NL thresholds need 0 <= lo < hi <= 1");
  }
  if (!(0.0 < mid_scale && mid_scale <= 1.0)) {
    throw InvalidArgument("NL mid_scale must lie in (0, 1]");
  }
}

double nl_step(double rho, const NlAccThresholds& th) {
  if (rho >= th.hi) return rho;
  if (rho >= th.lo) return th.mid_scale * rho;
  return 0.0;
}

double r_acc_nl(std::string_view pred_text, std::string_view gold_text, const EmbeddingProvider& provider,
                const NlAccThresholds& th) {
  std::vector<EmbeddingVector> v = embed_all(provider, {std::string(pred_text), std::string(gold_text)});
  return nl_step(cosine(v[0], v[1]), th);
}

}  // namespace sqlreward::semantic
