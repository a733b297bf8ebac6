"""Run manifest tasks and assemble deterministic reports."""
from __future__ import annotations

import json
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from ..errors import ContactRedError, DescentFailure, InputError
from ..symexpr import SamplingConfig, Status
from .manifest import Manifest, build_manifest
from .tasks import OPS

REPORT_FORMAT = "contactred-report/1"

EXIT_OK, EXIT_FALSIFIED, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 1, 2, 3


def task_seed(seed: int, name: str) -> int:
    return zlib.crc32(f"{seed}:{name}".encode()) & 0x7FFFFFFF


def run_task(m: Manifest, index: int, seed: int, samples: int | None) -> dict:
    t = m.tasks[index]
    s = task_seed(seed, t.name)
    cfg = SamplingConfig(seed=s) if samples is None else SamplingConfig(seed=s, samples=samples)
    out = {"name": t.name, "op": t.op, "seed": s}
    start = time.perf_counter()
    verdict, result, error = None, None, None
    try:
        verdict, result = OPS[t.op][1](m, t.args, cfg)
    except DescentFailure as exc:
        error = exc
        verdict = exc.verdict
        result = {"failed_condition": exc.condition}
    except ContactRedError as exc:
        error = exc
    out["seconds"] = round(time.perf_counter() - start, 4)

    if error is None:
        observed = verdict.status.value if verdict is not None else "Computed"
    elif isinstance(error, DescentFailure):
        observed = Status.FALSIFIED.value
    else:
        observed = "InputError" if isinstance(error, InputError) else "Error"
    if error is not None:
        out["error"] = {"type": type(error).__name__, "message": str(error)}
    if verdict is not None:
        out["verdict"] = verdict.to_json()
    if result is not None:
        out["result"] = result
    if t.expect_error:
        got = type(error).__name__ if error is not None else None
        out["expected_error"] = t.expect_error
        out["status"] = "Verified" if got == t.expect_error else "Falsified"
    elif t.expect_status and observed not in ("InputError", "Error"):
        out["expected_status"] = t.expect_status
        out["observed_status"] = observed
        out["status"] = "Verified" if observed == t.expect_status else "Falsified"
    else:
        out["status"] = observed
    return out


def exit_code(entries) -> int:
    statuses = {e["status"] for e in entries}
    if statuses & {"InputError", "Error"}:
        return EXIT_INPUT
    if "Falsified" in statuses:
        return EXIT_FALSIFIED
    if "Inconclusive" in statuses:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


@dataclass
class Report:
    header: dict
    tasks: list = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return exit_code(self.tasks)

    def summary(self) -> dict:
        out: dict = {}
        for e in self.tasks:
            out[e["status"]] = out.get(e["status"], 0) + 1
        return dict(sorted(out.items()))

    def to_json(self) -> dict:
        timings = self.header.get("timings", False)
        tasks = self.tasks if timings else [{k: v for k, v in e.items() if k != "seconds"} for e in self.tasks]
        return {**self.header, "tasks": tasks, "summary": self.summary(), "exit_code": self.exit_code}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=False, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        timings = self.header.get("timings", False)
        lines = [f"manifest {self.header['manifest']}  seed {self.header['seed']}"]
        for e in self.tasks:
            extra = ""
            if e.get("error"):
                extra = f"  [{e['error']['type']}: {e['error']['message']}]"
            elif e["status"] in ("Falsified", "Inconclusive") and "verdict" in e:
                extra = f"  [{_first_failure(e['verdict'])}]"
            t = f"  {e['seconds']:.2f}s" if timings else ""
            lines.append(f"  {e['status']:<12} {e['name']} ({e['op']}){t}{extra}")
        lines.append(f"summary {self.summary()}  exit {self.exit_code}")
        return "\n".join(lines) + "\n"


def _first_failure(v: dict, path="") -> str:
    for name, part in v.get("parts", {}).items():
        if part["status"] != "Verified":
            return _first_failure(part, f"{path}/{name}" if path else name)
    return path or v.get("status", "")


_WORKER: dict = {}


def _init_worker(raw, name):
    _WORKER["m"] = build_manifest(raw, name)


def _work(args):
    index, seed, samples = args
    return run_task(_WORKER["m"], index, seed, samples)


def run(m: Manifest, seed: int = 0, parallelism: int = 1, samples: int | None = None,
        only: str | None = None, fmt: str = "json", timings: bool = False) -> Report:
    header = {"format_version": REPORT_FORMAT, "manifest": m.name, "seed": seed,
              "samples": samples if samples is not None else SamplingConfig().samples,
              "parallel": parallelism, "format": fmt, "timings": timings}
    if only is not None:
        header["task"] = only
    indices = [i for i, t in enumerate(m.tasks) if only is None or t.name == only]
    if only is not None and not indices:
        raise InputError(f"no task named {only!r}")
    if parallelism > 1 and len(indices) > 1:
        with ProcessPoolExecutor(max_workers=parallelism, initializer=_init_worker,
                                 initargs=(m.raw, m.name)) as pool:
            entries = list(pool.map(_work, [(i, seed, samples) for i in indices]))
    else:
        entries = [run_task(m, i, seed, samples) for i in indices]
    return Report(header, entries)
