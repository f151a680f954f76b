"""Report generation: CSV export and gnuplot scripts.

``export_rows_csv`` writes one scenario sweep to a flat file with a header row.
Floats carry 17 significant digits so every value reads back as the same double;
lines end in LF on every platform. ``build_gnuplot_script`` produces a plain-text
script that plots chosen columns of that CSV against the first one.
"""
from __future__ import annotations

import csv
from collections.abc import Sequence
from pathlib import Path

Cell = float | int | str | None


def format_cell(value: Cell) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def export_rows_csv(columns: Sequence[str], rows: Sequence[Sequence[Cell]], destination: Path) -> None:
    destination.parent.mkdir(parents=True, exist_ok=True)
    with destination.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            if len(row) != len(columns):
                raise ValueError(f"row has {len(row)} cells for {len(columns)} columns")
            writer.writerow([format_cell(value) for value in row])


def build_gnuplot_script(
    csv_path: Path, columns: Sequence[str], y_columns: Sequence[str], title: str
) -> str:
    x_label = columns[0]
    lines: list[str] = []
    lines.append(f"# Plot of {csv_path.name}")
    lines.append("set datafile separator ','")
    lines.append("set key autotitle columnhead")
    lines.append(f"set title '{title}'")
    lines.append(f"set xlabel '{x_label}'")
    lines.append("set grid")
    plots = [
        f"'{csv_path.name}' using 1:{columns.index(name) + 1} with lines"
        for name in y_columns
    ]
    lines.append("plot " + ", \\\n     ".join(plots))
    lines.append("")
    return "\n".join(lines)


def write_gnuplot_script(
    csv_path: Path, columns: Sequence[str], y_columns: Sequence[str], title: str
) -> Path:
    script_path = csv_path.with_name(csv_path.name + ".gp")
    script_path.write_text(
        build_gnuplot_script(csv_path, columns, y_columns, title), encoding="utf-8", newline="\n"
    )
    return script_path
