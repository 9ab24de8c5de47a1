namespace foamlab { namespace { [[maybe_unused]] int placeholder_manifest = 0; } }
