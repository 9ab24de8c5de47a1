namespace foamlab { namespace { [[maybe_unused]] int placeholder_runner = 0; } }
