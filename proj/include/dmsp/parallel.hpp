#pragma once

#include <functional>

namespace dmsp {

// Runs fn(i) for i in [0, count), spreading across threads when the estimated
// work (flops_per_item * count) is large enough to pay for them. Each index
// must touch only its own output slots, so results are identical either way.
// Calls nested inside a running parallel_for execute serially: the outermost
// loop owns the hardware.
void parallel_for(int count, double flops_per_item,
                  const std::function<void(int)>& fn);

}  // namespace dmsp
