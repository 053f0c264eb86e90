#pragma once

#include "levykin/solver_lfp.hpp"

namespace levykin::detail {

// Appends one sample per call to a SimTrace and enforces the blow-up guard.
class TraceRecorder {
 public:
  TraceRecorder(const WeightedL2& space, const HypoCoeffs& coeffs, const SimOptions& opts, SimTrace& trace)
      : space_(space), coeffs_(coeffs), opts_(opts), trace_(trace) {}

  void record(double t, const ModeSet& modes);

 private:
  const WeightedL2& space_;
  const HypoCoeffs& coeffs_;
  const SimOptions& opts_;
  SimTrace& trace_;
  double initial_ = 0.0;
};

}  // namespace levykin::detail
