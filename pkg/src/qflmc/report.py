"""CSV output for sweep results."""

import csv
import io
from pathlib import Path

HEADER = ("sweep_axis", "sweep_value", "scheme", "mean_mse", "stderr_mse", "gain_used", "replications", "seed")


def _num(x):
    return format(float(x), ".17e")


def format_csv(result):
    if not result.rows:
        raise ValueError("refusing to write an empty sweep result")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HEADER)
    for r in result.rows:
        writer.writerow(
            (result.axis, _num(r.sweep_value), r.scheme, _num(r.mean_mse), _num(r.stderr_mse), _num(r.gain_used),
             int(r.replications), int(result.seed))
        )
    return buf.getvalue()


def emit_csv(result, path):
    """Write ``result`` as UTF-8 CSV with ``\\n`` line endings."""
    text = format_csv(result)
    path = Path(path)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc


def read_csv(path):
    """Parse a file written by :func:`emit_csv` into a list of dicts with typed values."""
    rows = []
    with open(path, encoding="utf-8", newline="") as fh:
        for rec in csv.DictReader(fh):
            rows.append(
                {
                    "sweep_axis": rec["sweep_axis"],
                    "sweep_value": float(rec["sweep_value"]),
                    "scheme": rec["scheme"],
                    "mean_mse": float(rec["mean_mse"]),
                    "stderr_mse": float(rec["stderr_mse"]),
                    "gain_used": float(rec["gain_used"]),
                    "replications": int(rec["replications"]),
                    "seed": int(rec["seed"]),
                }
            )
    return rows
