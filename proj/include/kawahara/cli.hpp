#pragma once

namespace kawahara {

/// Entry point behind main(). Exit codes: 0 success, 1 usage error,
/// 2 runtime failure, 3 validation/condition failure.
int run_cli(int argc, char** argv);

}  // namespace kawahara
