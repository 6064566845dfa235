"""On-disk artifacts: JSON records, CSV series, trajectory archives."""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from ..forcing import make_law
from ..solver import MildTrajectory, TimeGrid


def to_jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if np.isfinite(v) else repr(v)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def canonical_json(obj):
    return json.dumps(to_jsonable(obj), sort_keys=True, separators=(",", ":"))


def write_json(path, obj):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(to_jsonable(obj), sort_keys=True, indent=2) + "\n")
    return path


def read_json(path):
    return json.loads(Path(path).read_text())


def write_csv(path, header, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(x)) for x in row])
    return path


def save_trajectory(path, traj):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savez_compressed(path, t=traj.times, u=traj.u, theta=traj.theta,
                        t_end=traj.grid.t_end, dt=traj.grid.dt, t_start=traj.grid.t_start,
                        mode=traj.mode, resolution=-1 if traj.resolution is None else traj.resolution,
                        law=json.dumps({"name": traj.law.name, "params": traj.law.params}))
    return path


def load_trajectory(path):
    with np.load(path) as z:
        law = json.loads(str(z["law"]))
        grid = TimeGrid(float(z["t_end"]), float(z["dt"]), float(z["t_start"]), min_steps=1)
        res = int(z["resolution"])
        return MildTrajectory(grid, z["u"].copy(), z["theta"].copy(), make_law(law["name"], **law["params"]),
                              str(z["mode"]), None, None if res < 0 else res)
