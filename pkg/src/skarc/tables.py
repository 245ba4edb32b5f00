"""Flat CSV emission of run reports.

Every file starts with a ``# {json}`` comment line carrying the resolved
configuration, the master seed and the package version; floats are written
with 17 significant digits and rows are sorted by key.
"""

import csv
import json
import os

from . import __version__


def fmt(x):
    return format(float(x), ".17g")


def header_line(config):
    meta = {"config": config, "seed": config.get("seed"), "version": __version__}
    return "# " + json.dumps(meta, sort_keys=True, separators=(",", ":")) + "\n"


def write_csv(path, config, columns, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(header_line(config))
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        w.writerows(rows)
    return path


def read_csv(path):
    """Rows of a file written by ``write_csv`` as dicts of strings (comment line skipped)."""
    with open(path, encoding="utf-8", newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def read_header(path):
    with open(path, encoding="utf-8") as fh:
        first = fh.readline()
    return json.loads(first[2:])


VECTOR_COLUMNS = ["b", "delta", "sequence_id", "word", "h_count", "t_count",
                  "x", "y", "z", "trace_distance"]
DM_COLUMNS = ["b", "delta", "m", "d_mean", "d_std", "draws", "d_sem"]
SWEEP_COLUMNS = ["b", "delta", "shots", "d_mean_vector", "d_fewest_h", "errbar"]
PROJECTION_COLUMNS = ["b", "delta", "sequence_id", "u", "v"]
CONTOUR_COLUMNS = ["b", "shots", "randomized", "d_mean", "d_std", "d_exact", "reference_shots"]


def _cells(report):
    return sorted(report.cells, key=lambda c: (c.b, c.delta))


def vector_rows(report):
    rows = []
    for c in _cells(report):
        for i, w in enumerate(c.words):
            x, y, z = c.vectors[i]
            rows.append([c.b, fmt(c.delta), i, w, w.count("H"), w.count("T"),
                         fmt(x), fmt(y), fmt(z), fmt(c.d_sequences[i])])
    return rows


def dm_rows(report):
    return [[c.b, fmt(c.delta), r.m, fmt(r.d_mean), fmt(r.d_std), r.draws, fmt(r.d_sem)]
            for c in _cells(report) for r in sorted(c.dm_curve, key=lambda r: r.m)]


def sweep_rows(report):
    return [[c.b, fmt(c.delta), c.shots, fmt(c.d_mean_vector), fmt(c.d_fewest_h), fmt(c.errbar)]
            for c in _cells(report)]


def projection_rows(report):
    return [[c.b, fmt(c.delta), i, fmt(u), fmt(v)]
            for c in _cells(report) for i, (u, v) in enumerate(c.projection)]


def contour_rows(rows):
    return [[r.b, r.shots, int(r.randomized), fmt(r.d_mean), fmt(r.d_std), fmt(r.d_exact),
             r.reference_shots] for r in sorted(rows, key=lambda r: (r.b, r.shots, r.randomized))]


def write_tables(report, directory):
    """Write vectors/dm_curve/sweep/projection CSVs into ``directory``; returns the paths."""
    os.makedirs(directory, exist_ok=True)
    cfg = report.config
    return [
        write_csv(os.path.join(directory, "vectors.csv"), cfg, VECTOR_COLUMNS, vector_rows(report)),
        write_csv(os.path.join(directory, "dm_curve.csv"), cfg, DM_COLUMNS, dm_rows(report)),
        write_csv(os.path.join(directory, "sweep.csv"), cfg, SWEEP_COLUMNS, sweep_rows(report)),
        write_csv(os.path.join(directory, "projection.csv"), cfg, PROJECTION_COLUMNS,
                  projection_rows(report)),
    ]
