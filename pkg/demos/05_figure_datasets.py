#!/usr/bin/env python3
"""Generate the four standard figure datasets as CSV plus simple SVG plots.

Output lands in ./out.  The same datasets are available from the command
line (`c3rotor figure --id N`); this script shows the library route.
"""

import os

from c3rotor import figure_data, write_svg

OUT = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(OUT, exist_ok=True)

jobs = [
    (1, {}, "compressed characteristic value across the low A spectrum"),
    (2, {"lam_max": 60.0, "samples": 30}, "lowest E and A levels plus barrier"),
    (3, {"samples": 50}, "first E and A pairs through their exceptional points"),
    (4, {"g_max": 8.0, "g_step": 0.25}, "eigenvalue families against g"),
]

for fid, options, blurb in jobs:
    fig = figure_data(fid, **options)
    csv_path = os.path.join(OUT, f"figure{fid}.csv")
    svg_path = os.path.join(OUT, f"figure{fid}.svg")
    with open(csv_path, "w") as fp:
        for key in sorted(fig.meta):
            fp.write(f"# {key}: {fig.meta[key]}\n")
        fp.write(",".join(fig.columns) + "\n")
        for row in fig.rows:
            fp.write(",".join(repr(v) if isinstance(v, float) else str(v) for v in row) + "\n")
    write_svg(fig, svg_path)
    print(f"figure {fid}: {len(fig.rows):4d} rows -> {csv_path}, {svg_path}")
    print(f"          {blurb}")
