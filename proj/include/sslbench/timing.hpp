#pragma once

#include <chrono>
#include <utility>

namespace sslbench {

// Monotonic wall time of the wrapped action, in milliseconds. Used around
// fit/predict stages only; dataset loading and report emission stay
// outside the measured cost.
template <class F>
double measure_epsilon_ms(F&& action) {
    const auto t0 = std::chrono::steady_clock::now();
    std::forward<F>(action)();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

} // namespace sslbench
