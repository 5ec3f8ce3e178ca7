"""Batch verification scans with checkpoint/resume and deterministic output.

Work is sharded by parameter value (a prime, prime power, m or n, depending
on the statement). Workers share nothing; results come back in parameter
order and a single writer appends them, so the output file does not depend
on the number of workers.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import logging
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from pathlib import Path
from typing import IO, Iterable, Iterator

from . import ff, theorems as th
from .ntheory import is_prime_power, primes_in

log = logging.getLogger(__name__)

CHECKPOINT_EVERY = 16


class CheckpointMismatch(RuntimeError):
    pass


@dataclass(frozen=True)
class ScanTask:
    statement_id: str
    min: int
    max: int
    d_class: str = "both"
    ext_degrees: tuple[int, ...] = (1,)
    d: int | None = None
    p: int | None = None  # characteristic for lemma2.1
    direct_bound: int = th.DEFAULT_DIRECT_BOUND
    trials: int = 20
    out: str | None = None
    checkpoint: str | None = None
    jobs: int = 1

    def __post_init__(self):
        if self.statement_id not in th.STATEMENTS:
            raise ValueError(f"unknown statement {self.statement_id!r}")
        if self.min > self.max:
            raise ValueError(f"min={self.min} > max={self.max}")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")
        if self.d_class not in ("square", "nonsquare", "both"):
            raise ValueError(f"bad d_class {self.d_class!r}")

    def fingerprint(self) -> str:
        # paths and worker count do not change the output, so they are not part of it
        semantic = {
            k: v
            for k, v in dataclasses.asdict(self).items()
            if k not in ("out", "checkpoint", "jobs")
        }
        blob = json.dumps(semantic, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    @property
    def d_classes(self) -> tuple[str, ...]:
        return ("square", "nonsquare") if self.d_class == "both" else (self.d_class,)


def parameters(task: ScanTask) -> list[int]:
    sid, lo, hi = task.statement_id, task.min, task.max
    if sid in ("thm1.1", "thm1.2"):
        out = []
        for q in range(max(lo, 3), hi + 1):
            pk = is_prime_power(q)
            if pk and pk[0] != 2 and pk[1] in task.ext_degrees:
                out.append(q)
        return out
    if sid == "lemma2.3":
        return [q for q in range(max(lo, 3), hi + 1) if (pk := is_prime_power(q)) and pk[0] != 2]
    if sid in ("thm1.4", "thm1.5"):
        return primes_in(lo, hi, (1, 4)) if hi >= 2 else []
    if sid in ("cor1.1", "cor1.2", "identities"):
        return [p for p in primes_in(lo, hi) if p != 2] if hi >= 2 else []
    if sid == "thm1.3":
        return [m for m in range(max(lo, 1), hi + 1) if m % 2]
    # lemma2.1, lemma2.2: n
    return list(range(max(lo, 1), hi + 1))


def run_parameter(task: ScanTask, value: int) -> list[th.VerificationRecord]:
    sid = task.statement_id
    if sid == "thm1.1":
        return [th.verify_thm_1_1(value, None, c) for c in task.d_classes]
    if sid == "thm1.2":
        return [th.verify_thm_1_2(value, None, c) for c in task.d_classes]
    if sid == "thm1.3":
        return [th.verify_thm_1_3(value, task.direct_bound)]
    if sid == "thm1.4":
        return [th.verify_thm_1_4(value)]
    if sid == "thm1.5":
        return [th.verify_thm_1_5(value)]
    if sid == "cor1.1":
        return [th.verify_cor_1_1(value)]
    if sid == "cor1.2":
        if task.d is not None:
            return [th.verify_cor_1_2(value, task.d)]
        recs = []
        for c in task.d_classes:
            if c == "square" or value <= 7:
                d = 1
            else:
                d = ff.least_nonsquare(ff.field_create(value)).coeffs[0]
            rec = th.verify_cor_1_2(value, d)
            rec.d_class = c
            recs.append(rec)
        return recs
    if sid == "identities":
        return [th.verify_identities(value)]
    if sid == "lemma2.1":
        p = task.p or 101
        return [
            th.verify_lemma_2_1(ff.field_create(p, k), value, task.trials)
            for k in task.ext_degrees
        ]
    if sid == "lemma2.2":
        return [th.verify_lemma_2_2(value, value)]
    if sid == "lemma2.3":
        return [th.verify_lemma_2_3(value, value)]
    raise ValueError(sid)


# ---------------------------------------------------------------------------
# assertion policy: which records can fail a run


def is_asserted(rec: dict) -> bool:
    sid, v = rec["statement_id"], rec["p_or_q"]
    if sid == "thm1.1":
        return rec["ext_degree"] == 1 and 7 <= v <= 500
    if sid == "cor1.1":
        return 7 <= v <= 1000 and v != 11
    if sid == "thm1.3":
        return rec["m"] in th.PUBLISHED_E_SETS
    if sid in ("thm1.4", "thm1.5"):
        return 5 <= v <= 1000
    if sid == "identities":
        return 5 <= v <= 500
    if sid in ("lemma2.1", "lemma2.2", "lemma2.3"):
        return True
    return False  # thm1.2, cor1.2: reported only


_E3: tuple[int, ...] | None = None


def _e3() -> tuple[int, ...]:
    global _E3
    if _E3 is None:
        _E3 = th.compute_E(3).members
    return _E3


def is_asserted_failure(rec: dict) -> bool:
    if not is_asserted(rec):
        return False
    verdict = rec["verdict"]
    if verdict == th.FAIL:
        return True
    if verdict == th.DEGENERATE_ZERO:
        return not (rec["statement_id"] == "thm1.5" and rec["p_or_q"] in _e3())
    return False


# ---------------------------------------------------------------------------
# checkpointed runner


@dataclass
class Checkpoint:
    fingerprint: str
    last_completed: int
    output_bytes: int

    @classmethod
    def load(cls, path: Path) -> "Checkpoint | None":
        if not path.exists():
            return None
        return cls(**json.loads(path.read_text()))

    def save(self, path: Path) -> None:
        tmp = path.with_name(path.name + ".tmp")
        with open(tmp, "w") as fh:
            json.dump(dataclasses.asdict(self), fh, sort_keys=True)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)


def _batches(values: list[int], size: int) -> Iterator[list[int]]:
    for i in range(0, len(values), size):
        yield values[i : i + size]


def _records(task: ScanTask, values: list[int], pool) -> Iterator[tuple[int, list[th.VerificationRecord]]]:
    fn = partial(run_parameter, task)
    results: Iterable = pool.map(fn, values) if pool is not None else map(fn, values)
    yield from zip(values, results)


def run_scan(task: ScanTask, stream: IO[str] | None = None, timing: bool = False) -> list[dict]:
    """Run ``task`` and return every record of the output (including
    records from earlier runs when resuming)."""
    values = parameters(task)
    ckpt_path = Path(task.checkpoint) if task.checkpoint else None
    out_path = Path(task.out) if task.out else None
    start_after = None
    offset = 0

    if ckpt_path is not None:
        ckpt = Checkpoint.load(ckpt_path)
        if ckpt is not None:
            if ckpt.fingerprint != task.fingerprint():
                raise CheckpointMismatch(f"checkpoint {ckpt_path} belongs to a different task")
            start_after, offset = ckpt.last_completed, ckpt.output_bytes
            log.info("resuming after %s", start_after)

    if out_path is not None:
        mode = "r+" if start_after is not None and out_path.exists() else "w"
        fh = open(out_path, mode, encoding="utf-8", newline="\n")
        fh.seek(offset)
        fh.truncate()
    else:
        fh = stream

    if start_after is not None:
        values = [v for v in values if v > start_after]

    emitted: list[dict] = []
    pool = ProcessPoolExecutor(max_workers=task.jobs) if task.jobs > 1 and len(values) > 1 else None
    try:
        for batch in _batches(values, CHECKPOINT_EVERY):
            for value, recs in _records(task, batch, pool):
                for rec in recs:
                    fh.write(rec.to_json(timing) + "\n")
                    if out_path is None:
                        emitted.append(rec.to_dict(timing))
            fh.flush()
            if out_path is not None:
                os.fsync(fh.fileno())
            if ckpt_path is not None and out_path is not None:
                Checkpoint(task.fingerprint(), batch[-1], fh.tell()).save(ckpt_path)
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
        if out_path is not None:
            fh.close()

    if out_path is not None:
        return [json.loads(line) for line in out_path.read_text(encoding="utf-8").splitlines() if line]
    return emitted


def summarize(records: list[dict]) -> tuple[str, int]:
    """Human-readable summary and the number of asserted failures."""
    verdicts = Counter(r["verdict"] for r in records)
    failures = [r for r in records if is_asserted_failure(r)]
    lines = [f"{len(records)} records: " + ", ".join(f"{k}={v}" for k, v in sorted(verdicts.items()))]
    cor12 = sorted(
        {int(r["computed"]["p_mod_7"]) for r in records
         if r["statement_id"] == "cor1.2" and r["computed"].get("symbol") == "-1"}
    )
    if any(r["statement_id"] == "cor1.2" for r in records):
        lines.append(f"cor1.2 residue classes mod 7 with symbol -1: {cor12}")
    for r in failures:
        lines.append(f"ASSERTED FAILURE: {json.dumps(r, sort_keys=True)}")
    return "\n".join(lines), len(failures)
