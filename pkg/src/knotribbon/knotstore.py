"""Built-in knots, external table ingestion and a persistent invariant cache.

Files live under ``$KNOTRIBBON_HOME`` (default ``~/.cache/knotribbon``):

``store.json``
    ingested knot records, ``{"schema": 1, "records": {name: {...}}}``.
``cache.json``
    computed invariants keyed by the SHA-256 of the canonical PD
    serialization (override the location with ``$KNOTRIBBON_CACHE``)::

        {"schema": 1,
         "entries": {"<sha256>": {"pd": "[[...]]",
                                  "determinant": 3,
                                  "invariant_factors": [3],
                                  "alexander": {"-1": 1, "0": -1, "1": 1}}}}

Both files are rewritten atomically (temp file + rename); a single writer at
a time is assumed.
"""
from __future__ import annotations

import csv
import hashlib
import json
import logging
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .exactalg import AbelianGroup, LaurentPoly
from .invariants import alexander, determinant, double_cover_homology
from .pdcode import PDCode, PDCodeError, parse_pd

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1

# Satellite knots with trefoil pattern and companions the mirrors of 9_46
# and 10_140 (45 and 51 crossings).
K0_PAPER_PD = """
[[1,49,2,48],[47,3,48,2],[3,47,4,46],[45,5,46,4],[5,45,6,44],[43,77,44,76],
 [6,75,7,76],[42,63,43,64],[7,65,8,64],[65,9,66,8],[66,41,67,42],
 [74,9,75,10],[73,41,74,40],[39,73,40,72],[10,71,11,72],[38,67,39,68],
 [11,69,12,68],[25,71,26,70],[69,25,70,24],[88,31,89,32],[51,31,52,30],
 [87,19,88,18],[52,19,53,20],[20,53,21,54],[29,55,30,54],[21,87,22,86],
 [28,85,29,86],[84,27,85,28],[55,27,56,26],[83,23,84,22],[56,23,57,24],
 [32,77,33,78],[17,79,18,78],[33,63,34,62],[16,61,17,62],[60,15,61,16],
 [79,15,80,14],[59,35,60,34],[80,35,81,36],[36,81,37,82],[37,59,38,58],
 [13,83,14,82],[12,57,13,58],[89,51,90,50],[49,1,50,90]]
"""

K1_PAPER_PD = """
[[13, 33, 14, 32], [33, 13, 34, 12], [11, 35, 12, 34], [35, 11, 36, 10], [9, 37, 10, 36],
 [37, 9, 38, 8], [39, 7, 40, 6], [5, 41, 6, 40], [23, 75, 24, 74], [73, 23, 74, 22],
 [30, 93, 31, 94], [31, 55, 32, 54], [14, 53, 15, 54], [15, 95, 16, 94], [91, 17, 92, 16],
 [92, 29, 93, 30], [55, 29, 56, 28], [56, 17, 57, 18], [26, 89, 27, 90], [27, 59, 28, 58],
 [18, 57, 19, 58], [19, 91, 20, 90], [59, 25, 60, 24], [60, 21, 61, 22], [87, 21, 88, 20],
 [88, 25, 89, 26], [51, 66, 52, 67], [52, 82, 53, 81], [95, 82, 96, 83], [96, 66, 97, 65],
 [83, 98, 84, 99], [84, 50, 85, 49], [63, 50, 64, 51], [64, 98, 65, 97], [47, 62, 48, 63],
 [48, 86, 49, 85], [99, 86, 100, 87], [100, 62, 101, 61], [3, 68, 4, 69], [4, 80, 5, 79],
 [41, 80, 42, 81], [42, 68, 43, 67], [69, 2, 70, 3], [70, 44, 71, 43], [77, 44, 78, 45],
 [78, 2, 79, 1], [45, 76, 46, 77], [46, 72, 47, 71], [101, 72, 102, 73], [102, 76, 1, 75],
 [7, 39, 8, 38]]
"""

TREFOIL_PD = "[[1,4,2,5],[3,6,4,1],[5,2,6,3]]"

# dim HFK-hat over F_2 in (Alexander, Maslov) gradings
HFK_K0 = {
    (-1, -3): 0, (-1, -2): 5, (-1, -1): 4, (-1, 0): 0,
    (0, -2): 0, (0, -1): 9, (0, 0): 8, (0, 1): 0,
    (1, -1): 0, (1, 0): 5, (1, 1): 4, (1, 2): 0,
}
HFK_K1 = {
    (-1, -3): 2, (-1, -2): 3, (-1, -1): 2, (-1, 0): 2,
    (0, -2): 4, (0, -1): 5, (0, 0): 4, (0, 1): 4,
    (1, -1): 2, (1, 0): 3, (1, 1): 2, (1, 2): 2,
}


class UnknownKnotError(KeyError):
    pass


@dataclass(frozen=True)
class KnotRecord:
    name: str
    pd: PDCode
    g4: int | None = None
    note: str | None = None

    def to_json(self) -> dict:
        return {"pd": self.pd.serialize(), "g4": self.g4, "note": self.note}


@dataclass(frozen=True)
class HFKTable:
    entries: Mapping[tuple[int, int], int]

    def __post_init__(self):
        if any(v < 0 for v in self.entries.values()):
            raise ValueError("HFK dimensions must be non-negative")


def hfk_table(name: str) -> HFKTable:
    tables = {"K0_paper": HFK_K0, "K1_paper": HFK_K1}
    try:
        return HFKTable(dict(tables[name]))
    except KeyError:
        raise UnknownKnotError(name) from None


def euler_characteristic(t: HFKTable) -> LaurentPoly:
    """Graded Euler characteristic ``sum (-1)^M dim(A, M) t^A``."""
    c: dict[int, int] = {}
    for (a, m), dim in t.entries.items():
        c[a] = c.get(a, 0) + (-1) ** (m % 2) * dim
    return LaurentPoly(c)


def torus_2q(q: int) -> KnotRecord:
    """The standard ``q``-crossing diagram of the (2, q) torus knot."""
    if q < 1 or q % 2 == 0:
        raise ValueError("q must be a positive odd integer")
    if q == 1:
        return KnotRecord("T2_1", PDCode(), 0, "T(2,1) is the unknot")
    w = 2 * q

    def lab(k):
        return (k - 1) % w + 1

    code = PDCode(tuple(
        (lab(2 * i - 1), lab(2 * i - 1 + q), lab(2 * i), lab(2 * i + q)) for i in range(1, q + 1)
    ))
    return KnotRecord(f"T2_{q}", code, (q - 1) // 2, f"torus knot T(2,{q})")


BUILTIN_NAMES = ("unknot", "trefoil", "K0_paper", "K1_paper")


def builtin(name: str) -> KnotRecord:
    if name == "unknot":
        return KnotRecord("unknot", PDCode(), 0)
    if name == "trefoil":
        return KnotRecord("trefoil", parse_pd(TREFOIL_PD), 1)
    if name == "K0_paper":
        return KnotRecord("K0_paper", parse_pd(K0_PAPER_PD), 1, "P_J(C0), C0 = mirror of 9_46")
    if name == "K1_paper":
        return KnotRecord("K1_paper", parse_pd(K1_PAPER_PD), 1, "P_J(C1), C1 = mirror of 10_140")
    raise UnknownKnotError(name)


def _lookup_key(name: str) -> str:
    return name.replace("_", "").lower()


def _atomic_write_json(path: Path, data) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=path.name, suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(data, fh, indent=1, sort_keys=True)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def default_home() -> Path:
    return Path(os.environ.get("KNOTRIBBON_HOME") or Path.home() / ".cache" / "knotribbon")


class KnotStore:
    """Ingested knot records, optionally persisted to ``path``."""

    def __init__(self, path: Path | str | None = None):
        self.path = Path(path) if path is not None else None
        self.records: dict[str, KnotRecord] = {}
        self.skipped: list[str] = []
        if self.path is not None and self.path.exists():
            self._load()

    @classmethod
    def default(cls) -> "KnotStore":
        return cls(default_home() / "store.json")

    def _load(self):
        data = json.loads(self.path.read_text(encoding="utf-8"))
        if data.get("schema") != SCHEMA_VERSION:
            log.warning("ignoring knot store %s with schema %r", self.path, data.get("schema"))
            return
        for name, rec in data["records"].items():
            self.records[name] = KnotRecord(name, parse_pd(rec["pd"]), rec.get("g4"), rec.get("note"))

    def save(self):
        if self.path is None:
            return
        _atomic_write_json(
            self.path,
            {"schema": SCHEMA_VERSION, "records": {n: r.to_json() for n, r in self.records.items()}},
        )

    def add(self, record: KnotRecord):
        if _lookup_key(record.name) in {_lookup_key(b) for b in BUILTIN_NAMES}:
            raise ValueError(f"{record.name!r} is a built-in name")
        self.records[record.name] = record

    def get(self, name: str) -> KnotRecord:
        """Look up a built-in or stored record; underscores and case are ignored."""
        for cand in BUILTIN_NAMES:
            if _lookup_key(cand) == _lookup_key(name):
                return builtin(cand)
        if name in self.records:
            return self.records[name]
        for rec in self.records.values():
            if _lookup_key(rec.name) == _lookup_key(name):
                return rec
        raise UnknownKnotError(name)

    def __contains__(self, name: str) -> bool:
        try:
            self.get(name)
        except UnknownKnotError:
            return False
        return True

    def all_records(self) -> list[KnotRecord]:
        return [builtin(n) for n in BUILTIN_NAMES] + list(self.records.values())

    def ingest_csv(self, path: Path | str) -> int:
        """Add knots from a ``name,pd_notation[,four_genus]`` table.

        Rows that fail validation are skipped and listed in ``self.skipped``.
        KnotInfo's ``|``-separated exports are accepted as well.
        """
        self.skipped = []
        text = Path(path).read_text(encoding="utf-8")
        lines = text.splitlines()
        if not lines:
            raise ValueError(f"{path}: empty file, no header")
        header = lines[0]
        delim = "|" if "|" in header and "," not in header else ","
        reader = csv.DictReader(lines, delimiter=delim)
        fields = [f.strip() for f in reader.fieldnames or []]
        reader.fieldnames = fields
        if "name" not in fields or "pd_notation" not in fields:
            raise ValueError(f"{path}: header must contain 'name' and 'pd_notation', got {fields}")
        added = 0
        for lineno, row in enumerate(reader, start=2):
            name = (row.get("name") or "").strip()
            try:
                if not name:
                    raise ValueError("missing name")
                code = parse_pd(row.get("pd_notation") or "")
                g4_raw = (row.get("four_genus") or "").strip()
                g4 = int(g4_raw) if g4_raw else None
                self.add(KnotRecord(name, code, g4, f"ingested from {Path(path).name}"))
            except (PDCodeError, ValueError) as exc:
                msg = f"{path}:{lineno}: skipped {name or '?'}: {exc}"
                log.warning(msg)
                self.skipped.append(msg)
                continue
            added += 1
        self.save()
        return added


def pd_hash(code: PDCode) -> str:
    return hashlib.sha256(code.serialize().encode()).hexdigest()


@dataclass(frozen=True)
class Invariants:
    determinant: int
    homology: AbelianGroup
    alexander: LaurentPoly


class InvariantCache:
    """Invariants keyed by canonical-PD hash, persisted to a JSON file.

    ``computations`` counts cache misses in this process.
    """

    def __init__(self, path: Path | str | None = None):
        self.path = Path(path) if path is not None else None
        self.entries: dict[str, dict] = {}
        self.computations = 0
        self._load()

    @classmethod
    def default(cls) -> "InvariantCache":
        env = os.environ.get("KNOTRIBBON_CACHE")
        return cls(Path(env) if env else default_home() / "cache.json")

    def _load(self):
        if self.path is None or not self.path.exists():
            return
        try:
            data = json.loads(self.path.read_text(encoding="utf-8"))
            if data.get("schema") != SCHEMA_VERSION:
                raise ValueError(f"schema {data.get('schema')!r}")
            entries = data["entries"]
            for v in entries.values():
                self._decode(v)
        except (OSError, ValueError, KeyError, TypeError, AttributeError) as exc:
            log.warning("discarding invariant cache %s: %s", self.path, exc)
            self.entries = {}
            return
        self.entries = entries

    @staticmethod
    def _decode(v: dict) -> Invariants:
        return Invariants(
            int(v["determinant"]),
            AbelianGroup.from_cyclic(v["invariant_factors"]),
            LaurentPoly.from_json(v["alexander"]),
        )

    def save(self):
        if self.path is not None:
            _atomic_write_json(self.path, {"schema": SCHEMA_VERSION, "entries": self.entries})

    def get(self, code: PDCode) -> Invariants:
        key = pd_hash(code)
        hit = self.entries.get(key)
        if hit is not None and hit.get("pd") == code.serialize():
            return self._decode(hit)
        self.computations += 1
        inv = Invariants(determinant(code), double_cover_homology(code), alexander(code))
        self.entries[key] = {
            "pd": code.serialize(),
            "determinant": inv.determinant,
            "invariant_factors": list(inv.homology.invariant_factors),
            "alexander": inv.alexander.to_json(),
        }
        self.save()
        return inv


def cached_invariants(r: KnotRecord, cache: InvariantCache | None = None) -> Invariants:
    return (cache or InvariantCache.default()).get(r.pd)
