#pragma once

namespace gtown::font {

// Bundled monospace glyph atlas covering printable ASCII (0x20..0x7E).
// Glyph g occupies kAtlas[(g - 0x20) * kCellWidth * kCellHeight ...] as 8-bit coverage,
// row-major, baseline at row kAscent.
extern const int kAtlasEm;
extern const int kCellWidth;
extern const int kCellHeight;
extern const int kAscent;
extern const unsigned char kAtlas[];

}  // namespace gtown::font
