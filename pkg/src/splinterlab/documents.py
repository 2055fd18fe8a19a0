"""JSON/CSV documents and the content-addressed facet cache.

Every rational is written as a canonical ``"p/q"`` string (``"5"`` when the
denominator is one).  JSON is emitted with sorted keys so equal content
gives equal bytes.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path

from .encodings import Instance, get_problem
from .polyhedra import ConePolyhedron, FaceStructure

CACHE_ENV = "SPLINTERLAB_CACHE"
DEFAULT_CACHE_DIR = ".splinterlab-cache"


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def load_json(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def write_text(text: str, out=None) -> None:
    if out is None or str(out) == "-":
        import sys
        sys.stdout.write(text)
        return
    Path(out).parent.mkdir(parents=True, exist_ok=True)
    Path(out).write_text(text, encoding="utf-8")


def csv_text(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (json.dumps(v, sort_keys=True) if isinstance(v, (list, dict)) else v)
                         for k, v in row.items()})
    return buf.getvalue()


def rational_list(v) -> list[str]:
    return [str(x) for x in v]


def parse_rational_list(items) -> tuple:
    if isinstance(items, str):
        items = [x for x in items.replace(" ", "").split(",") if x]
    return tuple(Fraction(str(x)) for x in items)


# -- instances and queries -----------------------------------------------------

def instance_to_document(inst: Instance) -> dict:
    return {"problem": inst.problem.name, "n": inst.n, "costs": rational_list(inst.costs)}


def instance_from_document(doc: dict) -> Instance:
    return Instance(get_problem(doc["problem"]), int(doc["n"]), parse_rational_list(doc["costs"]))


def query_from_document(doc) -> tuple:
    """A query file is ``{"vector": [...]}``; a bare array is accepted too."""
    if isinstance(doc, list):
        return parse_rational_list(doc)
    for key in ("vector", "query", "costs"):
        if key in doc:
            return parse_rational_list(doc[key])
    raise ValueError("query document needs a 'vector' field")


# -- faces -----------------------------------------------------------------------

def faces_to_document(F: FaceStructure) -> dict:
    P = F.polyhedron
    return {
        "polyhedron": P.to_document(),
        "interior": rational_list(F.interior) if F.interior is not None else None,
        "facet_flags": list(F.facet_flags),
        "witnesses": {str(i): rational_list(w) for i, w in sorted(F.witnesses.items())},
    }


def faces_from_document(doc: dict) -> FaceStructure:
    P = ConePolyhedron.from_document(doc["polyhedron"])
    interior = parse_rational_list(doc["interior"]) if doc.get("interior") is not None else None
    witnesses = {int(k): parse_rational_list(v) for k, v in doc.get("witnesses", {}).items()}
    return FaceStructure(P, tuple(bool(x) for x in doc["facet_flags"]), witnesses, interior)


def cache_dir(explicit=None) -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path(explicit) if explicit else Path(DEFAULT_CACHE_DIR)


def cache_key(kind: str, problem: str, n: int, stream_doc: dict) -> str:
    payload = json.dumps({"kind": kind, "problem": problem, "n": n, "stream": stream_doc},
                         sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()


def cache_read(directory: Path, key: str) -> str | None:
    path = directory / f"{key}.json"
    if path.exists():
        return path.read_text(encoding="utf-8")
    return None


def cache_write(directory: Path, key: str, text: str) -> None:
    """Write-once: an existing entry is left untouched."""
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{key}.json"
    if path.exists():
        return
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        fh.write(text)
    try:
        os.link(tmp, path)  # fails if another writer won the race
    except FileExistsError:
        pass
    finally:
        os.unlink(tmp)
