"""Path exchange files: a knots CSV and a JSON record of the fitted spline."""
import csv
import json

import numpy as np

from .errors import ParameterError

PATH_SCHEMA = "mobdiv.path/1"


def path_record(spline, L_p, wavelength, cost=None, regime=None):
    return {
        "schema": PATH_SCHEMA,
        "wavelength_m": float(wavelength),
        "N": int(spline.knots.shape[0]),
        "L_p_m": float(L_p),
        "L_p_arc_m": float(spline.length),
        "cost": None if cost is None else float(cost),
        "regime": regime,
        "knots": spline.knots.tolist(),
        # per segment: [a, b, c] with Pi(t) = a + b t + c t^2
        "coefficients": spline.coeffs.tolist(),
    }


def save_path_json(path, record):
    with open(path, "w") as fh:
        json.dump(record, fh, indent=2)
        fh.write("\n")


def load_path_json(path):
    try:
        with open(path) as fh:
            rec = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParameterError(f"cannot read path file {path}: {exc}") from exc
    if rec.get("schema") != PATH_SCHEMA:
        raise ParameterError(f"{path}: expected schema {PATH_SCHEMA!r}, got {rec.get('schema')!r}")
    knots = np.asarray(rec.get("knots"), dtype=float)
    if knots.ndim != 2 or knots.shape[1] != 2 or knots.shape[0] < 2:
        raise ParameterError(f"{path}: knots must be an (N, 2) list with N >= 2")
    rec["knots"] = knots
    return rec


def save_knots_csv(path, knots):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["j", "x_m", "y_m"])
        for j, (x, y) in enumerate(np.asarray(knots), start=1):
            w.writerow([j, repr(float(x)), repr(float(y))])


def load_knots_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return np.array([[float(r["x_m"]), float(r["y_m"])] for r in rows])
