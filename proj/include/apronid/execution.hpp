#pragma once

namespace apronid {

// Selects between the OpenMP kernel and its serial reference. Both paths
// produce bit-identical results; the serial one exists for testing and for
// benchmarking the parallel speedup.
enum class Execution { serial, parallel };

}  // namespace apronid
