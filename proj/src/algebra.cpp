namespace foamlab { namespace { [[maybe_unused]] int placeholder_algebra = 0; } }
