"""Angle literals such as ``pi``, ``pi/2``, ``3pi/4``, ``-pi/8`` or ``0.25``."""

from __future__ import annotations

import math
import re
from fractions import Fraction

_PI_RE = re.compile(r"^([+-]?)(\d*(?:\.\d+)?)\*?pi(?:/(\d+(?:\.\d+)?))?$")


def parse_angle(text: str) -> float:
    s = text.strip().lower().replace(" ", "").replace("π", "pi")
    m = _PI_RE.match(s)
    if m:
        sign, coef, den = m.groups()
        value = float(coef) if coef else 1.0
        value *= math.pi
        if den:
            value /= float(den)
        return -value if sign == "-" else value
    try:
        value = float(s)
    except ValueError:
        raise ValueError(f"cannot parse angle {text!r}") from None
    if not math.isfinite(value):
        raise ValueError(f"angle must be finite: {text!r}")
    return value


def format_angle(x: float, max_den: int = 16, atol: float = 1e-12) -> str:
    """Render ``x`` as a pi fraction when it is one, otherwise with 12 significant digits."""
    if abs(x) < atol:
        return "0"
    frac = Fraction(x / math.pi).limit_denominator(max_den)
    if abs(float(frac) * math.pi - x) < atol:
        num, den = frac.numerator, frac.denominator
        sign = "-" if num < 0 else ""
        num = abs(num)
        head = "pi" if num == 1 else f"{num}pi"
        return sign + head + ("" if den == 1 else f"/{den}")
    return f"{x:.12g}"
