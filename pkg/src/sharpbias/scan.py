"""Parameter sweeps of the qubit coexistence criterion.

Pairs are placed in a fixed frame: ``a = ra (1, 0, 0)`` and
``b = rb (cos t, sin t, 0)`` with ``t`` the angle between the Bloch vectors.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .effect_core import EPS_EIG, EffectError
from .qubit import MARGINAL_BAND, QubitEffect, are_coexistent, coexistence_lhs

SCAN_HEADER = ("a0", "b0", "ra", "rb", "angle_deg", "lhs", "status")
PARAMS = ("a0", "b0", "ra", "rb", "angle_deg")


class ScanRangeError(EffectError):
    pass


def parse_range(text: str) -> tuple[float, ...]:
    """``"v"`` or ``"start:stop:step"`` (stop inclusive) to a tuple of grid values."""
    parts = text.split(":")
    try:
        nums = [float(p) for p in parts]
    except ValueError:
        raise ScanRangeError(f"bad range {text!r}") from None
    if len(nums) == 1:
        return (nums[0],)
    if len(nums) != 3:
        raise ScanRangeError(f"range must be 'v' or 'start:stop:step', got {text!r}")
    start, stop, step = nums
    if step <= 0 or stop < start:
        raise ScanRangeError(f"empty or invalid range {text!r}")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return tuple(start + i * step for i in range(n))


def direction(angle_deg: float) -> tuple[float, float, float]:
    """Unit vector at ``angle_deg`` in the x-y plane; exact at multiples of 90 degrees."""
    q, rem = divmod(angle_deg, 90.0)
    if rem == 0.0:
        return [(1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (-1.0, 0.0, 0.0), (0.0, -1.0, 0.0)][int(q) % 4]
    t = math.radians(angle_deg)
    return (math.cos(t), math.sin(t), 0.0)


def make_pair(a0, b0, ra, rb, angle_deg) -> tuple[QubitEffect, QubitEffect]:
    u = direction(angle_deg)
    return QubitEffect(a0, (ra, 0.0, 0.0)), QubitEffect(b0, tuple(rb * c for c in u))


@dataclass(frozen=True)
class ScanRow:
    a0: float
    b0: float
    ra: float
    rb: float
    angle_deg: float
    lhs: float
    status: str

    def as_tuple(self):
        return (self.a0, self.b0, self.ra, self.rb, self.angle_deg, self.lhs, self.status)


def _check_domain(a0s, rs, label):
    for a0 in a0s:
        if not 0.0 <= a0 <= 1.0:
            raise ScanRangeError(f"{label}: identity coefficient {a0} outside [0, 1]")
        for r in rs:
            if r < 0.0 or r > min(a0, 1.0 - a0) + EPS_EIG:
                raise ScanRangeError(f"{label}: radius {r} outside the effect domain for a0 = {a0}")


def scan(a0s, b0s, ras, rbs, angles, tie_radii: bool = False,
         band: float = MARGINAL_BAND) -> list[ScanRow]:
    """Row-major sweep over ``a0, b0, ra, rb, angle``; ``tie_radii`` sets ``rb = ra``."""
    _check_domain(a0s, ras, "A")
    _check_domain(b0s, ras if tie_radii else rbs, "B")
    rows = []
    rb_iter = (None,) if tie_radii else rbs
    for a0, b0, ra, rb, ang in itertools.product(a0s, b0s, ras, rb_iter, angles):
        rb = ra if tie_radii else rb
        A, B = make_pair(a0, b0, ra, rb, ang)
        v = are_coexistent(A, B, band)
        rows.append(ScanRow(a0, b0, ra, rb, ang, v.lhs, v.status.value))
    return rows


@dataclass(frozen=True)
class Flip:
    """A verdict change between neighbouring rows, located by linear interpolation of ``lhs``."""

    before: ScanRow
    after: ScanRow
    params: dict
    lhs: float


def locate_flips(rows: list[ScanRow]) -> list[Flip]:
    """Find status changes between consecutive rows that differ in one parameter."""
    flips = []
    for r0, r1 in zip(rows, rows[1:]):
        if r0.status == r1.status:
            continue
        p0 = {k: getattr(r0, k) for k in PARAMS}
        p1 = {k: getattr(r1, k) for k in PARAMS}
        changed = [k for k in PARAMS if p0[k] != p1[k]]
        if not changed or r1.lhs == r0.lhs:
            continue
        t = (1.0 - r0.lhs) / (r1.lhs - r0.lhs)
        t = min(max(t, 0.0), 1.0)
        p = {k: p0[k] + t * (p1[k] - p0[k]) for k in PARAMS}
        flips.append(Flip(r0, r1, p, coexistence_lhs(*make_pair(**p))))
    return flips
