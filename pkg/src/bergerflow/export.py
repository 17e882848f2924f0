"""CSV trajectories and the key-value manifest format.

Manifests are UTF-8 text, one ``dotted.key = <json value>`` per line, sorted
by key.  Nested mappings flatten to dotted keys, so a manifest round-trips
through :func:`dumps_kv` / :func:`loads_kv` without loss.
"""

from __future__ import annotations

import csv
import io
import json
import os
import time
from typing import Any, Iterable, Sequence

from . import __version__
from .berger import BergerContext
from .flows import TrajectorySample
from .liealg import hopf_project

CSV_COLUMNS = ("t", "q0", "q1", "q2", "q3", "A", "B", "C", "hx", "hy", "hz")


def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        if "." in k or " = " in k or "\n" in k:
            raise ValueError(f"invalid key {k!r}")
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            if not v:
                raise ValueError(f"empty mapping at {key!r} cannot be represented")
            out.update(_flatten(v, key + "."))
        else:
            out[key] = v
    return out


def dumps_kv(d: dict) -> str:
    flat = _flatten(d)
    return "".join(f"{k} = {json.dumps(flat[k], allow_nan=False)}\n" for k in sorted(flat))


def loads_kv(text: str) -> dict:
    out: dict[str, Any] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        key, sep, raw = line.partition(" = ")
        if not sep:
            raise ValueError(f"line {lineno}: expected 'key = value'")
        node = out
        parts = key.split(".")
        for p in parts[:-1]:
            node = node.setdefault(p, {})
        node[parts[-1]] = json.loads(raw)
    return out


def timestamp() -> str:
    """UTC time, or ``SOURCE_DATE_EPOCH`` when set (for reproducible outputs)."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    t = int(epoch) if epoch is not None else int(time.time())
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(t))


def make_manifest(command: str, params: dict, outputs: Sequence[str] = ()) -> dict:
    return {
        "command": command,
        "params": params,
        "outputs": list(outputs),
        "version": __version__,
        "timestamp": timestamp(),
    }


def trajectory_rows(samples: Iterable[TrajectorySample], ctx: BergerContext):
    for s in samples:
        g, w = s.gamma, s.omega
        h = hopf_project(g, ctx.c)
        yield (s.t, g.q0, g.q1, g.q2, g.q3, w.A, w.B, w.C, float(h[0]), float(h[1]), float(h[2]))


def trajectory_csv(samples: Iterable[TrajectorySample], ctx: BergerContext) -> str:
    """CSV text with a header row; floats use the shortest round-trip repr."""
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(CSV_COLUMNS)
    for row in trajectory_rows(samples, ctx):
        wr.writerow([repr(float(x)) for x in row])
    return buf.getvalue()


def read_csv(text: str) -> tuple[list[str], list[list[float]]]:
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], [[float(x) for x in r] for r in rows[1:]]


def write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
