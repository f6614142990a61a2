// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

#include "restir/rng.hpp"

namespace restir {

/// Weighted reservoir sampling state (N = 1): the selected sample, the running
/// sum of resampling weights, the confidence count M and the unbiased
/// contribution weight W. W plays the role of a reciprocal PDF for the
/// selected sample and is set by finalize() once the stream is complete.
///
/// M is kept as a real so confidence capping during temporal reuse composes
/// uniformly; plain stream updates increment it by 1.
template <typename S>
struct Reservoir {
    std::optional<S> sample;
    double w_sum = 0;
    double M = 0;
    double W = 0;

    /// Streams one candidate with resampling weight w. The candidate replaces
    /// the held sample with probability w / w_sum.
    void update(const S &y, double w, Pcg32 &rng) {
        if (!(w >= 0) || !std::isfinite(w))
            throw std::invalid_argument("reservoir update: weight must be finite and >= 0");
        w_sum += w;
        M += 1;
        if (w > 0 && rng.next_double() < w / w_sum)
            sample = y;
    }

    /// Contribution weight for the selected sample: W = w_sum / p_hat.
    /// A zero target (or an empty reservoir) finalizes to W = 0; such samples
    /// shade to zero anyway.
    void finalize(double p_hat_at_sample) {
        W = (sample && p_hat_at_sample > 0) ? w_sum / p_hat_at_sample : 0;
    }

    bool empty() const { return !sample.has_value(); }
};

} // namespace restir
