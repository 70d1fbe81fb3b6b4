#pragma once

namespace ncsim::cli {

// Routes argv to the module operations. Exit codes: 0 success, 1 domain
// errors (no match, invalid catalogue, failed replay), 2 usage errors.
int dispatch(int argc, const char* const* argv);

} // namespace ncsim::cli
