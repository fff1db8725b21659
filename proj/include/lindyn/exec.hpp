#pragma once

namespace lindyn {

// Kernel selection for the data-parallel loops: the OpenMP path is the
// default, the serial path is the reference the tests compare against.
enum class ExecMode { serial, parallel };

}  // namespace lindyn
