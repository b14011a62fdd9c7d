"""CSV emission and the JSON run-metadata sidecar.

Numbers are written with six significant digits (``%.6g``); strings are
written as they are.  Everything that varies between identical runs
(timestamps, timings, library versions) goes to the sidecar
``<out>.meta.json``, never to the CSV.
"""

import csv
import datetime
import io
import json
import math
import platform

import numpy as np
import scipy

from .. import __version__


def format_value(v):
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return "%.6g" % v
    return "" if v is None else str(v)


def report_csv(report):
    """The report as CSV text with a header row."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(report.columns)
    for row in report.rows:
        writer.writerow([format_value(row.get(c, "")) for c in report.columns])
    return buf.getvalue()


def sidecar(report, cfg):
    meta = dict(report.metadata)
    meta.update(
        timestamp=datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds"),
        versions=dict(gencauchy=__version__, numpy=np.__version__, scipy=scipy.__version__,
                      python=platform.python_version()),
        config={k: (list(v) if isinstance(v, tuple) else v)
                for k, v in cfg.__dict__.items() if k != "extra"},
    )
    return meta


def write_report(report, cfg, stream=None):
    """Write CSV to ``cfg.out`` (plus sidecar) or to ``stream`` when ``out`` is unset."""
    text = report_csv(report)
    if cfg.out is None:
        stream.write(text)
        return None
    with open(cfg.out, "w", newline="") as fh:
        fh.write(text)
    meta_path = cfg.out + ".meta.json"
    with open(meta_path, "w") as fh:
        json.dump(sidecar(report, cfg), fh, indent=2, default=str)
        fh.write("\n")
    return meta_path
