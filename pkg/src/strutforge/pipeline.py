"""End-to-end dimension pipeline, result records, and the result cache.

A dimension run builds the basis, generates relations, ranks the matrix
over several primes, and emits an immutable ResultRecord.  Records are
cached append-only in a JSON-lines file keyed by (mode, space, k, param,
tool_version) so sweeps resume for free.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Sequence

from . import __version__ as TOOL_VERSION
from .bases import (
    Basis,
    DEFAULT_MAX_ELEMENTS,
    enumerate_basis,
    enumerate_y_basis,
)
from .diagrams import Mode, encoding_trivalent_count
from .errors import CacheError, DomainError
from .linalg import (
    DEFAULT_PRIMES,
    SparseMatrix,
    cokernel_functionals,
    rank_multiprime,
)
from .relations import (
    DEFAULT_MAX_ROWS,
    RelationRow,
    count_ihx_instances,
    count_link_configs,
    ihx_relations,
    link_relations,
    y_link_config_count,
    y_link_relations,
)

CSV_HEADER = ("mode,space,k,param,num_diagrams,num_relations_raw,"
              "num_relations_effective,rank,quotient_dim,primes,elapsed_ms,"
              "tool_version,timestamp")

CACHE_ENV_VAR = "STRUTFORGE_CACHE_DIR"
CACHE_FILENAME = "results.jsonl"


@dataclass(frozen=True)
class ResultRecord:
    """One cached dimension computation; immutable once written."""

    mode: str
    space: str
    k: int
    param: int
    num_diagrams: int
    num_relations_raw: int
    num_relations_effective: int
    rank: int
    quotient_dim: int
    primes: tuple[int, ...]
    elapsed_ms: int
    tool_version: str
    timestamp: str

    def key(self) -> tuple:
        return (self.mode, self.space, self.k, self.param, self.tool_version)

    def to_json(self) -> str:
        data = asdict(self)
        data["primes"] = list(self.primes)
        return json.dumps(data)

    @classmethod
    def from_json(cls, line: str) -> "ResultRecord":
        data = json.loads(line)
        data["primes"] = tuple(data["primes"])
        return cls(**data)

    def csv_row(self) -> str:
        return ",".join([
            self.mode, self.space, str(self.k), str(self.param),
            str(self.num_diagrams), str(self.num_relations_raw),
            str(self.num_relations_effective), str(self.rank),
            str(self.quotient_dim), ";".join(str(p) for p in self.primes),
            str(self.elapsed_ms), self.tool_version, self.timestamp,
        ])


def build_basis(mode: Mode, space: str, k: int, param: int,
                max_elements: int = DEFAULT_MAX_ELEMENTS) -> Basis:
    if space == "y":
        return enumerate_y_basis(k, param, mode, max_elements)
    if space == "full":
        return enumerate_basis(k, param, mode, max_elements)
    raise DomainError(f"space must be 'y' or 'full', got {space!r}")


def build_relations(mode: Mode, space: str, k: int, param: int, basis: Basis,
                    max_rows: int = DEFAULT_MAX_ROWS
                    ) -> tuple[list[RelationRow], int]:
    """(deduplicated nonzero rows, raw configuration count)."""
    if space == "y":
        raw = y_link_config_count(k, param, mode)
        rows = y_link_relations(k, param, mode, basis, max_rows)
        return rows, raw
    raw = count_link_configs(k, param, mode) + count_ihx_instances(basis)
    link = link_relations(k, param, mode, basis, max_rows)
    ihx = ihx_relations(k, param, mode, basis)
    seen = {row.entries: row for row in link}
    for row in ihx:
        seen.setdefault(row.entries, row)
    return [seen[key] for key in sorted(seen)], raw


def compute_dimension(mode: Mode, space: str, k: int, param: int,
                      primes: Sequence[int] = DEFAULT_PRIMES,
                      max_elements: int = DEFAULT_MAX_ELEMENTS,
                      max_rows: int = DEFAULT_MAX_ROWS) -> ResultRecord:
    """Full pipeline for one cell: basis, relations, multi-prime rank."""
    start = time.monotonic()
    basis = build_basis(mode, space, k, param, max_elements)
    rows, raw = build_relations(mode, space, k, param, basis, max_rows)
    result = rank_multiprime(SparseMatrix.from_rows(rows, len(basis)), primes)
    elapsed_ms = int((time.monotonic() - start) * 1000)
    return ResultRecord(
        mode=mode.value, space=space, k=k, param=param,
        num_diagrams=len(basis), num_relations_raw=raw,
        num_relations_effective=len(rows), rank=result.rank,
        quotient_dim=result.quotient_dim, primes=result.primes,
        elapsed_ms=elapsed_ms, tool_version=TOOL_VERSION,
        timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
    )


def compute_witness(mode: Mode, space: str, k: int, param: int,
                    prime: int = DEFAULT_PRIMES[0],
                    max_elements: int = DEFAULT_MAX_ELEMENTS,
                    max_rows: int = DEFAULT_MAX_ROWS) -> dict:
    """Witness document: basis encodings plus the cokernel functionals,
    each a mod-p linear functional vanishing on every relation."""
    basis = build_basis(mode, space, k, param, max_elements)
    rows, _ = build_relations(mode, space, k, param, basis, max_rows)
    functionals = cokernel_functionals(
        SparseMatrix.from_rows(rows, len(basis)), prime)
    return {
        "basis": [cd.encoding.hex() for cd in basis.elements],
        "prime": prime,
        "functionals": functionals,
    }


def trivalent_block_quotient(basis: Basis, rows: Sequence[RelationRow],
                             trivalent: int,
                             primes: Sequence[int] = DEFAULT_PRIMES) -> int:
    """Quotient dimension of the sub-block whose diagrams have the given
    trivalent-vertex count (relations never mix counts, so the block is
    closed)."""
    cols = [i for i, cd in enumerate(basis.elements)
            if encoding_trivalent_count(cd.encoding) == trivalent]
    remap = {col: j for j, col in enumerate(cols)}
    block_rows = []
    for row in rows:
        if all(c in remap for c, _ in row.entries):
            block_rows.append(RelationRow(
                tuple((remap[c], v) for c, v in row.entries), row.provenance))
    result = rank_multiprime(
        SparseMatrix.from_rows(block_rows, len(cols)), primes)
    return result.quotient_dim


def resolve_cache_dir(flag_value: Optional[str] = None) -> Path:
    """Cache directory precedence: flag, then the environment variable,
    then ./cache."""
    if flag_value:
        return Path(flag_value)
    env = os.environ.get(CACHE_ENV_VAR)
    if env:
        return Path(env)
    return Path.cwd() / "cache"


class ResultCache:
    """Append-only JSON-lines store of ResultRecords.

    Lookups scan the file; the first record matching (mode, space, k,
    param, tool_version) wins, so re-computations never shadow history.
    """

    def __init__(self, directory: Path):
        self.directory = Path(directory)
        self.path = self.directory / CACHE_FILENAME

    def lookup(self, mode: Mode, space: str, k: int, param: int,
               tool_version: str = TOOL_VERSION) -> Optional[ResultRecord]:
        if not self.path.exists():
            return None
        key = (mode.value, space, k, param, tool_version)
        try:
            with self.path.open("r", encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    record = ResultRecord.from_json(line)
                    if record.key() == key:
                        return record
        except (OSError, json.JSONDecodeError, TypeError, KeyError) as exc:
            raise CacheError(f"unreadable cache {self.path}: {exc}") from exc
        return None

    def append(self, record: ResultRecord) -> None:
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(record.to_json() + "\n")
                fh.flush()
        except OSError as exc:
            raise CacheError(f"cannot write cache {self.path}: {exc}") from exc

    def get_or_compute(self, mode: Mode, space: str, k: int, param: int,
                       primes: Sequence[int] = DEFAULT_PRIMES,
                       max_elements: int = DEFAULT_MAX_ELEMENTS,
                       max_rows: int = DEFAULT_MAX_ROWS) -> tuple[ResultRecord, bool]:
        """(record, was_cached)."""
        hit = self.lookup(mode, space, k, param)
        if hit is not None:
            return hit, True
        record = compute_dimension(mode, space, k, param, primes,
                                   max_elements, max_rows)
        self.append(record)
        return record, False
