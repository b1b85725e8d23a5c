"""Channel sampling, cascaded diagonals and CSV dump/load"""

import csv
import json
import logging
import math
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from ..errors import ArgumentError
from ..models.channel import ChannelRealization, ComplexArray, FloatArray
from ..models.scenario import ScenarioParams
from .scenario import link_budget

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


def _check_elements(N: int) -> int:
    if isinstance(N, bool) or int(N) != N or N < 1:
        raise ArgumentError(f"element count must be a positive integer, got {N!r}")
    return int(N)


def sample_channels(
    params: ScenarioParams, N: int, rng: np.random.Generator
) -> ChannelRealization:
    """Draw per-element phases of h_IU and h_SI uniformly on [0, 2pi)."""
    N = _check_elements(N)
    budget = link_budget(params)
    phi_IU = rng.uniform(0.0, TWO_PI, N)
    phi_SI = rng.uniform(0.0, TWO_PI, N)
    return ChannelRealization(
        mu_IU=budget.mu_IU,
        mu_SI=budget.mu_SI,
        mu_SU=budget.mu_SU,
        phi_IU=phi_IU,
        phi_SI=phi_SI,
        phi_SU=params.phi_SU,
    )


def cascaded_diagonals(ch: ChannelRealization) -> Tuple[ComplexArray, ComplexArray, complex]:
    """Return the diagonals of D_IU and D_SI, and the direct coefficient h_SU."""
    return ch.h_IU, ch.h_SI, ch.h_SU


def cascaded_channel(ch: ChannelRealization) -> ComplexArray:
    """Per-element product h_IU,i * h_SI,i, i.e. D_IU D_SI 1."""
    return ch.h_IU * ch.h_SI


def compensated_phases(ch: ChannelRealization) -> FloatArray:
    """theta_i = -(phi_IU,i + phi_SI,i), cancelling the cascaded phases."""
    return np.mod(-(ch.phi_IU + ch.phi_SI), TWO_PI)


def dump_realization(ch: ChannelRealization, path: Union[str, Path]) -> Path:
    """Write a realization as CSV: a JSON comment line, then index, phi_IU, phi_SI."""
    if ch.amp_IU is not None or ch.amp_SI is not None:
        raise ArgumentError("only constant-magnitude realizations can be dumped")
    path = Path(path)
    meta = {"mu_IU": ch.mu_IU, "mu_SI": ch.mu_SI, "mu_SU": ch.mu_SU, "phi_SU": ch.phi_SU}
    with path.open("w", newline="") as handle:
        handle.write("# " + json.dumps(meta, sort_keys=True) + "\n")
        writer = csv.writer(handle)
        writer.writerow(["index", "phi_IU", "phi_SI"])
        for i, (a, b) in enumerate(zip(ch.phi_IU, ch.phi_SI)):
            writer.writerow([i, repr(float(a)), repr(float(b))])
    logger.debug("wrote %d-element realization to %s", ch.N, path)
    return path


def load_realization(path: Union[str, Path]) -> ChannelRealization:
    path = Path(path)
    try:
        with path.open(newline="") as handle:
            first = handle.readline()
            if not first.startswith("#"):
                raise ArgumentError(f"{path}: missing metadata comment line")
            meta = json.loads(first[1:])
            rows = list(csv.DictReader(handle))
    except (OSError, json.JSONDecodeError) as exc:
        raise ArgumentError(f"cannot read realization from {path}: {exc}") from exc
    if not rows:
        raise ArgumentError(f"{path}: realization has no elements")
    rows.sort(key=lambda row: int(row["index"]))
    return ChannelRealization(
        mu_IU=float(meta["mu_IU"]),
        mu_SI=float(meta["mu_SI"]),
        mu_SU=float(meta["mu_SU"]),
        phi_IU=np.array([float(row["phi_IU"]) for row in rows]),
        phi_SI=np.array([float(row["phi_SI"]) for row in rows]),
        phi_SU=float(meta["phi_SU"]),
    )
