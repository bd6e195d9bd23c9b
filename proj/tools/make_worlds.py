#!/usr/bin/env python3
"""Regenerates the bundled world files under data/worlds/."""

import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent / "data" / "worlds"


class Canvas:
    def __init__(self, width_m, height_m, resolution):
        self.res = resolution
        self.w = round(width_m / resolution)
        self.h = round(height_m / resolution)
        self.cells = [["."] * self.w for _ in range(self.h)]

    def rect(self, x0, y0, x1, y1, ch):
        """Fills the metric rectangle [x0, x1) x [y0, y1)."""
        for cy in range(round(y0 / self.res), round(y1 / self.res)):
            for cx in range(round(x0 / self.res), round(x1 / self.res)):
                if 0 <= cx < self.w and 0 <= cy < self.h:
                    self.cells[cy][cx] = ch

    def border(self, thickness):
        t = thickness
        self.rect(0, 0, self.w * self.res, t, "#")
        self.rect(0, self.h * self.res - t, self.w * self.res, self.h * self.res, "#")
        self.rect(0, 0, t, self.h * self.res, "#")
        self.rect(self.w * self.res - t, 0, self.w * self.res, self.h * self.res, "#")

    def text(self, comment):
        lines = [f"% {c}" for c in comment] + [f"resolution {self.res}"]
        lines += ["".join(row) for row in reversed(self.cells)]
        return "\n".join(lines) + "\n"


def field():
    c = Canvas(40, 40, 0.25)
    c.border(0.25)
    # Fence across the field with three gates.
    for x0, x1 in [(0, 4), (7.5, 18), (21.5, 32), (35.5, 40)]:
        c.rect(x0, 18, x1, 18.5, "#")
    # Crop plots south of the fence, one disease class each, with marker posts at the corners.
    for x0, ch in [(6, "B"), (15, "Y"), (24, "H")]:
        c.rect(x0, 5, x0 + 6, 14, ch)
        for px, py in [(x0 - 1, 4), (x0 + 6.5, 4), (x0 - 1, 14.5), (x0 + 6.5, 14.5)]:
            c.rect(px, py, px + 0.5, py + 0.5, "#")
    # A small healthy strip by the east wall keeps the plots asymmetric.
    c.rect(33, 10, 37, 14, "H")
    c.rect(37.5, 3, 38, 6, "#")
    # Farmhouse with an L-shaped annex, and a shed.
    c.rect(14, 27, 22, 35, "#")
    c.rect(22, 27, 25, 30, "#")
    c.rect(30, 29, 35, 33, "#")
    # Posts and a water trough in the yard.
    for px, py in [(9, 28), (10, 34), (27, 23), (31, 23), (37, 37), (4, 31)]:
        c.rect(px, py, px + 0.5, py + 0.5, "#")
    c.rect(28, 36, 32, 36.5, "#")
    return c.text(["40 x 40 m farm: fenced crop field (south), farmhouse, shed and yard posts (north)."])


def corridor():
    c = Canvas(20, 8, 0.1)
    c.border(0.2)
    # Asymmetric features: pillars, alcoves and a partial wall so every pose is distinguishable.
    for px, py, w, h in [(3, 2, 0.4, 0.4), (7.5, 5.4, 0.6, 0.6), (12, 1.2, 0.3, 0.8), (16.5, 4.5, 0.5, 1.2)]:
        c.rect(px, py, px + w, py + h, "#")
    c.rect(5, 7.2, 6.5, 8, ".")
    c.rect(5, 7.6, 6.5, 7.8, "#")
    c.rect(10, 0, 11.5, 0.8, "#")
    c.rect(14, 6.6, 18, 7.8, "#")
    c.rect(0.2, 3.5, 1.5, 3.8, "#")
    return c.text(["20 x 8 m corridor with asymmetric pillars and alcoves."])


def tiny():
    c = Canvas(2.5, 2.5, 0.5)
    return c.text(["5 x 5 all-free world."])


if __name__ == "__main__":
    ROOT.mkdir(parents=True, exist_ok=True)
    (ROOT / "field.world").write_text(field())
    (ROOT / "corridor.world").write_text(corridor())
    (ROOT / "tiny.world").write_text(tiny())
