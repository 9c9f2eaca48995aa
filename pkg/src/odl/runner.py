"""Single runs and parameter sweeps, with their file outputs."""

import csv
import dataclasses
import io
import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .classify import classify_attitudes
from .engine import simulate
from .rng import replica_seed

log = logging.getLogger(__name__)

TRAJECTORY_HEADER = "step,agent,attitude"


def _num(x):
    """Shortest round-trip text for a float; stable across runs and platforms."""
    return repr(float(x))


def trajectory_csv(trajectory):
    """``step,agent,attitude`` rows for every recorded step."""
    lines = [TRAJECTORY_HEADER]
    for k, row in zip(trajectory.steps.tolist(), trajectory.attitudes):
        lines.extend(f"{k},{i},{_num(x)}" for i, x in enumerate(row.tolist()))
    return "\n".join(lines) + "\n"


def _jsonable(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def run_params(config, spec, seed):
    preset = {f.name: _jsonable(getattr(spec.preset, f.name))
              for f in dataclasses.fields(spec.preset)}
    return {
        "preset": spec.preset.name,
        "model": preset,
        "scheduler": spec.scheduler.value,
        "N": config.N,
        "steps": config.steps,
        "seed": seed,
        "bound": config.bound,
        "topology": config.topology.kind,
    }


def classify_final(config, attitudes):
    c = config.classifier
    label, summary = classify_attitudes(
        attitudes, config.bound, c.eps_ext, c.bins, c.eps_ext_fraction, c.min_fraction,
        c.min_sep)
    return label, summary


def execute(config, seed=None, record_every=None):
    """Run one configuration; returns ``(trajectory, label, summary)``."""
    seed = config.seed if seed is None else seed
    spec, pop = config.build(seed)
    every = record_every or config.output.record_every
    traj = simulate(spec, pop, config.steps, seed, record_every=every)
    label, summary = classify_final(config, traj.last)
    return traj, label, summary


def run_simulation(config, seed=None, out_dir=None):
    """Run, then write the trajectory CSV and the classification JSON.

    Returns the classification record.
    """
    seed = config.seed if seed is None else seed
    traj, label, summary = execute(config, seed)
    out = Path(out_dir if out_dir is not None else config.output.dir)
    out.mkdir(parents=True, exist_ok=True)
    record = {"label": label.value, **summary.to_dict(),
              "params": run_params(config, traj.spec, seed)}
    (out / config.output.trajectory).write_text(trajectory_csv(traj), encoding="utf-8")
    (out / config.output.classification).write_text(
        json.dumps(record, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    log.info("run seed=%d label=%s -> %s", seed, label.value, out)
    return record


# -- sweeps ------------------------------------------------------------------

def _replica_task(task):
    cell, replica, values, config, seed = task
    row = {"cell": cell, "replica": replica, **values, "seed": seed,
           "label": "", "median": "", "variance": "", "modes": "", "error": ""}
    try:
        _, label, summary = execute(config, seed, record_every=max(config.steps, 1))
        row.update(label=label.value, median=_num(summary.median),
                   variance=_num(summary.variance),
                   modes=";".join(_num(m) for m in summary.modes))
    except Exception as exc:  # one failed replica must not sink the sweep
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def sweep_tasks(sweep):
    tasks = []
    for cell, values in enumerate(sweep.cells()):
        config = sweep.cell_config(values)
        for r in range(sweep.replicas):
            seed = replica_seed(sweep.base.seed, cell, sweep.replicas, r)
            tasks.append((cell, r, values, config, seed))
    return tasks


def run_sweep(sweep, jobs=None):
    """All (cell, replica) rows, ordered by cell then replica."""
    jobs = jobs or sweep.jobs
    tasks = sweep_tasks(sweep)
    if jobs == 1 or len(tasks) == 1:
        rows = [_replica_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunk = max(1, len(tasks) // (4 * jobs))
            rows = list(pool.map(_replica_task, tasks, chunksize=chunk))
    rows.sort(key=lambda r: (r["cell"], r["replica"]))
    failed = sum(1 for r in rows if r["error"])
    if failed:
        log.warning("%d of %d replicas failed", failed, len(rows))
    return rows


def sweep_csv(sweep, rows):
    names = [ax.name for ax in sweep.sweep]
    cols = ["cell", "replica", *names, "seed", "label", "median", "variance", "modes", "error"]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (_num(v) if k in names else v) for k, v in r.items()})
    return buf.getvalue()


def write_sweep(sweep, rows, out_dir=None):
    path = Path(sweep.output)
    if out_dir is not None:
        path = Path(out_dir) / path.name
    if path.parent != Path(""):
        os.makedirs(path.parent, exist_ok=True)
    path.write_text(sweep_csv(sweep, rows), encoding="utf-8")
    return path


def read_attitudes(path):
    """Final attitudes from a trajectory CSV, or the ``attitude`` column of any CSV."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if not reader.fieldnames or "attitude" not in reader.fieldnames:
            raise ValueError(f"{path}: no 'attitude' column")
        rows = list(reader)
    if "step" in reader.fieldnames and rows:
        last = max(int(r["step"]) for r in rows)
        rows = [r for r in rows if int(r["step"]) == last]
    return np.array([float(r["attitude"]) for r in rows])
