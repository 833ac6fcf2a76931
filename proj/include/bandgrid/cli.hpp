#pragma once

namespace bandgrid {

int run_cli(int argc, const char* const* argv);

}  // namespace bandgrid
