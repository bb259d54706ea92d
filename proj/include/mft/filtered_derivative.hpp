#pragma once

#include "mft/event_series.hpp"
#include "mft/step_process.hpp"

namespace mft {

// Filtered derivative of the counting process for window h:
//   G_{h,t} = (N_(t,t+h] - N_(t-h,t]) / s_hat(t,h),   0 where s_hat = 0,
// on the analysis region (h, T-h], represented by its closure [h, T-h].
// The step representation is exact: every location where a window edge
// crosses an event (t in {S_i - h, S_i, S_i + h}) is a breakpoint.
// Requires 0 < h <= T/2.
StepProcess g_process(const EventSeries& series, double h);

// Raw count difference D_{h,t} = N_(t,t+h] - N_(t-h,t] without
// normalization, same domain and breakpoints as g_process.
StepProcess count_difference(const EventSeries& series, double h);

// Standardized absolute filtered derivative R = (|G| - mean) / sd, sharing
// G's breakpoints. Requires sd > 0.
StepProcess r_process(const StepProcess& g, double mean, double sd);

} // namespace mft
