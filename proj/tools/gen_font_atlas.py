#!/usr/bin/env python3
"""Regenerates src/font_atlas.cpp from DejaVu Sans Mono.

The atlas holds 8-bit coverage for printable ASCII (0x20..0x7e) in fixed-size
cells. DejaVu fonts are distributed under the Bitstream Vera license, which
permits embedding.
"""
import sys
from PIL import Image, ImageDraw, ImageFont

FONT = "/usr/share/fonts/truetype/dejavu/DejaVuSansMono.ttf"
EM = 48


def main(out_path):
    font = ImageFont.truetype(FONT, EM)
    ascent, descent = font.getmetrics()
    cell_w = round(font.getlength("M"))
    cell_h = ascent + descent
    glyphs = []
    for code in range(0x20, 0x7F):
        img = Image.new("L", (cell_w, cell_h), 0)
        ImageDraw.Draw(img).text((0, 0), chr(code), font=font, fill=255)
        glyphs.append(img.tobytes())
    with open(out_path, "w") as out:
        out.write("// Generated by tools/gen_font_atlas.py from DejaVu Sans Mono "
                  "(Bitstream Vera license). Do not edit.\n")
        out.write('#include "graphictown/font.hpp"\n\nnamespace gtown::font {\n\n')
        out.write(f"const int kAtlasEm = {EM};\nconst int kCellWidth = {cell_w};\n")
        out.write(f"const int kCellHeight = {cell_h};\nconst int kAscent = {ascent};\n\n")
        out.write("const unsigned char kAtlas[] = {\n")
        data = b"".join(glyphs)
        for i in range(0, len(data), 24):
            out.write("  " + ",".join(str(b) for b in data[i:i + 24]) + ",\n")
        out.write("};\n\n}  // namespace gtown::font\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/font_atlas.cpp")
