#include "mw/quantities.hpp"

// All of quantities is inline in the header; this translation unit only
// anchors the module in the library.
