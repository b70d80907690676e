"""Append-only JSONL result cache with crash-safe resume.

One file per orbifold.  Class records are written first, then a completion
marker for the (n, k, q) key; resume trusts only marked keys, so a crash
mid-key recomputes that key.  Lines that fail to parse are quarantined to a
side file and their keys recomputed.
"""

import json
import os

from .errors import ParameterError

SCHEMA_VERSION = 1


def cache_path(cache_dir: str, n: int, k: int) -> str:
    return os.path.join(cache_dir, f"twist_n{n}_k{k}.jsonl")


def _marker(n, k, q, count):
    return {
        "schema": SCHEMA_VERSION,
        "kind": "q_done",
        "n": n,
        "k": k,
        "q": q,
        "classes": count,
    }


def append_q_records(path: str, n: int, k: int, q: int, records) -> None:
    """Write all class records for one q plus its completion marker in a
    single append (atomic at the line level)."""
    lines = []
    for rec in records:
        body = dict(rec)
        body["schema"] = SCHEMA_VERSION
        body["kind"] = "class"
        lines.append(json.dumps(body, sort_keys=True))
    lines.append(json.dumps(_marker(n, k, q, len(records)), sort_keys=True))
    payload = "\n".join(lines) + "\n"
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(payload)
        fh.flush()
        os.fsync(fh.fileno())


def read_cache(path: str):
    """Returns (done: dict (n,k,q) -> class count, records: list, bad: int).

    Unparseable lines are appended to `<path>.quarantine` and dropped.
    """
    done = {}
    records = []
    bad_lines = []
    if not os.path.exists(path):
        return done, records, 0
    if not os.access(path, os.R_OK):
        raise OSError(f"cache file {path} is not readable")
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                if obj.get("schema") != SCHEMA_VERSION:
                    raise ValueError("schema mismatch")
                kind = obj["kind"]
                key = (obj["n"], obj["k"], obj["q"])
                if kind == "q_done":
                    done[key] = obj["classes"]
                elif kind == "class":
                    records.append(obj)
                else:
                    raise ValueError("unknown record kind")
            except (ValueError, KeyError, TypeError):
                bad_lines.append(line)
    if bad_lines:
        with open(path + ".quarantine", "a", encoding="utf-8") as fh:
            for line in bad_lines:
                fh.write(line + "\n")
    # drop class records of keys without a completion marker
    records = [r for r in records if (r["n"], r["k"], r["q"]) in done]
    return done, records, len(bad_lines)


def cache_resume(cache_dir: str, plan):
    """Filter a plan of (n, k, q) work items down to what is not yet done.

    Idempotent; corrupted lines are quarantined (their keys recompute).
    """
    if not os.path.isdir(cache_dir):
        raise OSError(f"cache directory {cache_dir} does not exist")
    if not os.access(cache_dir, os.R_OK):
        raise OSError(f"cache directory {cache_dir} is not readable")
    done_all = {}
    for n, k in sorted({(n, k) for n, k, _ in plan}):
        done, _, _ = read_cache(cache_path(cache_dir, n, k))
        done_all.update(done)
    return [item for item in plan if tuple(item) not in done_all]


def load_records(cache_dir: str, n: int, k: int):
    if cache_dir is None:
        raise ParameterError("no cache directory configured")
    _, records, _ = read_cache(cache_path(cache_dir, n, k))
    return records
