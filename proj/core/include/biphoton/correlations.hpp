#pragma once

#include "biphoton/mps.hpp"
#include "biphoton/observables.hpp"

namespace biphoton::mps {

/// Two-time correlation map of the transmitted field, evaluated on the fully
/// scattered chain (TLS at the right end).  Samples every `stride`-th bin in
/// both time coordinates, starting at t0.
/// kind: second_order=true  -> G2(t_i, t_j) = <n_i n_j>/dt^2 (i != j),
///                             <n(n-1)>/dt^2 on the diagonal;
///       second_order=false -> G1(t_i, t_j) = <b_i^dag b_j>/dt.
CorrelationMap two_time_correlation(TimeBinMPS& state, bool second_order, int stride = 1,
                                    double t0 = 0.0);

}  // namespace biphoton::mps
