namespace foamlab { namespace { [[maybe_unused]] int placeholder_report = 0; } }
