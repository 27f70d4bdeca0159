#pragma once

#include "ntklens/kernels.hpp"

namespace ntklens::detail {

// Shared implementation of the window kernel. check_distinct enforces the
// tracked-unit precondition; instance windows pass false and may repeat
// tokens (overlap becomes a multiset count).
double cnn_window_value(const std::vector<int> &window, const Instance &x,
                        const VarianceProfile &vars, bool check_distinct);

} // namespace ntklens::detail
