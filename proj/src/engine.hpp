#pragma once

#include "mvclust/model.hpp"

namespace mvclust::detail {

/// Shared iteration loop. Without pruning it is the plain solver; with
/// pruning, features/views are dropped after each feature-weight update.
FitResult run_solver(const MultiViewDataset& data, const HyperParams& params, bool pruning);

} // namespace mvclust::detail
