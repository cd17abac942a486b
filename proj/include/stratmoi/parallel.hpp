#pragma once

#include <functional>

namespace stratmoi {

// Runs body(0..n-1) on up to `jobs` worker threads. Tasks must be independent;
// results are whatever the body writes into its own slot, so the outcome does
// not depend on the worker count. The first exception is rethrown after join.
void parallel_for(int n, int jobs, const std::function<void(int)>& body);

}  // namespace stratmoi
