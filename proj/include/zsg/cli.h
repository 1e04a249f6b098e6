#pragma once

namespace zsg {

// Entry point of the `zsg` executable. Returns 0 on success, 2 on a usage or
// configuration error and 1 on any other failure.
int cli_main(int argc, char** argv);

}  // namespace zsg
