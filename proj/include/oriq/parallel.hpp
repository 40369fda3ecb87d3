#pragma once

namespace oriq {

/// Caps the OpenMP worker count. 0 restores the runtime default.
void set_thread_count(int n);

int thread_count();

}  // namespace oriq
