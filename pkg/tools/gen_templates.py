#!/usr/bin/env python3
"""Regenerate the bundled doodle template file.

Each of the 23 doodle classes gets one canonical stroke-sequence template
drawn in a nominal 256x256 space; four icon classes whose stylized form has
an outer boundary (avatar, cancel, checkbox, plus) also get a variant with
the boundary stripped, since people often skip it.

Usage: python tools/gen_templates.py [out_path]
"""

import json
import math
import sys
from pathlib import Path

OUT = Path(sys.argv[1]) if len(sys.argv) > 1 else (
    Path(__file__).resolve().parents[1] / "src" / "doodlesearch" / "data" /
    "templates.json")


def pt(x, y):
    return [round(x), round(y)]


def circle(cx, cy, r, n=24, start=-90.0):
    pts = []
    for i in range(n + 1):
        a = math.radians(start + 360.0 * i / n)
        pts.append(pt(cx + r * math.cos(a), cy + r * math.sin(a)))
    return pts


def arc(cx, cy, r, a0, a1, n=12):
    pts = []
    for i in range(n + 1):
        a = math.radians(a0 + (a1 - a0) * i / n)
        pts.append(pt(cx + r * math.cos(a), cy + r * math.sin(a)))
    return pts


def line(x0, y0, x1, y1):
    return [pt(x0, y0), pt(x1, y1)]


def rect(x0, y0, x1, y1):
    return [pt(x0, y0), pt(x1, y0), pt(x1, y1), pt(x0, y1), pt(x0, y0)]


def squiggle_wave():
    pts = []
    for i in range(25):
        t = i / 24.0
        pts.append(pt(32 + 192 * t, 128 - 20 * math.sin(4 * math.pi * t)))
    return pts


def stadium(x0, y0, x1, y1):
    # pill outline: straight top, right cap, straight bottom, left cap
    r = (y1 - y0) / 2.0
    cy = (y0 + y1) / 2.0
    pts = [pt(x0 + r, y0), pt(x1 - r, y0)]
    pts += arc(x1 - r, cy, r, -90, 90, 8)[1:]
    pts += [pt(x0 + r, y1)]
    pts += arc(x0 + r, cy, r, 90, 270, 8)[1:]
    return pts


def cloud_outline():
    pts = [pt(60, 156)]
    pts += arc(86, 134, 28, 160, 310, 8)[1:]
    pts += arc(128, 114, 34, 195, 345, 10)[1:]
    pts += arc(170, 134, 28, 230, 20, 8)[1:]
    pts += [pt(196, 156), pt(60, 156)]
    return pts


def star_pentagram(cx=128, cy=140, r=100):
    order = [-90, 54, 198, 342, 126, -90]
    return [pt(cx + r * math.cos(math.radians(a)),
               cy + r * math.sin(math.radians(a))) for a in order]


CLASSES = {
    "avatar": [
        {"strokes": [circle(128, 128, 110),
                     circle(128, 96, 38, 16),
                     arc(128, 216, 78, 205, 335, 10)]},
        {"strokes": [circle(128, 96, 38, 16),
                     arc(128, 216, 78, 205, 335, 10)]},
    ],
    "back": [
        {"strokes": [line(170, 52, 86, 128), line(86, 128, 170, 204)]},
    ],
    "cancel": [
        {"strokes": [circle(128, 128, 100, start=-45),
                     line(64, 64, 192, 192), line(192, 64, 64, 192)]},
        {"strokes": [line(64, 64, 192, 192), line(192, 64, 64, 192)]},
    ],
    "checkbox": [
        {"strokes": [[pt(88, 128), pt(118, 160), pt(180, 84)],
                     rect(56, 56, 200, 200)]},
        {"strokes": [[pt(88, 128), pt(118, 160), pt(180, 84)]]},
    ],
    "dropdown": [
        {"strokes": [rect(32, 96, 224, 160),
                     [pt(176, 112), pt(196, 144), pt(216, 112)]]},
    ],
    "forward": [
        {"strokes": [line(86, 52, 170, 128), line(170, 128, 86, 204)]},
    ],
    "left_arrow": [
        {"strokes": [line(208, 128, 48, 128),
                     [pt(96, 80), pt(48, 128), pt(96, 176)]]},
    ],
    "menu": [
        {"strokes": [line(48, 76, 208, 76), line(48, 128, 208, 128),
                     line(48, 180, 208, 180)]},
    ],
    "play": [
        {"strokes": [[pt(84, 52), pt(84, 204), pt(196, 128), pt(84, 52)]]},
    ],
    "plus": [
        {"strokes": [circle(128, 128, 100),
                     line(68, 128, 188, 128), line(128, 68, 128, 188)]},
        {"strokes": [line(68, 128, 188, 128), line(128, 68, 128, 188)]},
    ],
    "search": [
        {"strokes": [circle(108, 108, 62, 20), line(152, 152, 208, 208)]},
    ],
    "setting": [
        {"strokes": [circle(128, 128, 62, 20),
                     line(128, 66, 128, 30), line(190, 128, 226, 128),
                     line(128, 190, 128, 226), line(66, 128, 30, 128)]},
    ],
    "share": [
        {"strokes": [circle(58, 128, 26, 12), circle(186, 58, 26, 12),
                     circle(186, 198, 26, 12),
                     line(82, 116, 162, 70), line(82, 140, 162, 186)]},
    ],
    "slider": [
        {"strokes": [line(32, 128, 224, 128), circle(150, 128, 22, 12)]},
    ],
    "squiggle": [
        {"strokes": [squiggle_wave()]},
    ],
    "switch": [
        {"strokes": [stadium(48, 96, 208, 160), circle(176, 128, 20, 12)]},
    ],
    "camera": [
        {"strokes": [rect(40, 84, 216, 196), circle(128, 140, 34, 16),
                     [pt(96, 84), pt(106, 60), pt(150, 60), pt(160, 84)]]},
    ],
    "cloud": [
        {"strokes": [cloud_outline()]},
    ],
    "envelope": [
        {"strokes": [rect(40, 72, 216, 184),
                     [pt(40, 72), pt(128, 140), pt(216, 72)]]},
    ],
    "house": [
        {"strokes": [[pt(48, 128), pt(128, 48), pt(208, 128)],
                     [pt(64, 128), pt(64, 208), pt(192, 208), pt(192, 128)]]},
    ],
    "jail_window": [
        {"strokes": [line(92, 56, 92, 200), line(128, 56, 128, 200),
                     line(164, 56, 164, 200), rect(56, 56, 200, 200)]},
    ],
    "square": [
        {"strokes": [rect(56, 56, 200, 200)]},
    ],
    "star": [
        {"strokes": [star_pentagram()]},
    ],
}


def main():
    doc = {"version": 1, "classes": CLASSES}
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(doc, indent=1))
    print(f"wrote {OUT} ({len(CLASSES)} classes)")


if __name__ == "__main__":
    main()
