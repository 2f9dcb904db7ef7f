"""Report records, JSON emission and the complex literal grammar."""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field

SCHEMA_VERSION = "1"
VERDICTS = ("pass", "fail", "anomaly", "inconclusive")

_NUM = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_CPLX = re.compile(rf"^(?P<re>{_NUM})?(?:(?P<im>[+-](?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?|[+-])i)?$")
_IMAG_ONLY = re.compile(rf"^(?P<im>{_NUM}|[+-])?i$")


def parse_complex(text: str) -> complex:
    """Parse 'a+bi', 'a', 'bi' or '-i'. Whitespace is not allowed."""
    s = text.strip()
    if not s or any(ch.isspace() for ch in s):
        raise ValueError(f"bad complex literal {text!r}")
    m = _IMAG_ONLY.match(s)
    if m:
        im = m.group("im")
        if im in (None, "+"):
            return 1j
        if im == "-":
            return -1j
        return complex(0.0, float(im))
    m = _CPLX.match(s)
    if not m or (m.group("re") is None and m.group("im") is None):
        raise ValueError(f"bad complex literal {text!r}")
    re_ = float(m.group("re")) if m.group("re") is not None else 0.0
    im = m.group("im")
    if im is None:
        return complex(re_, 0.0)
    if im in ("+", "-"):
        im += "1"
    return complex(re_, float(im))


def _fmt_real(x: float) -> str:
    if x == 0:
        return "0.0"
    return repr(float(x))


def fmt_complex(z) -> str:
    z = complex(z)
    im = z.imag
    sign = "-" if math.copysign(1.0, im) < 0 and im != 0 else "+"
    return f"{_fmt_real(z.real)}{sign}{_fmt_real(abs(im))}i"


def jsonable(x):
    """Recursively convert numpy scalars, complex numbers and tuples."""
    import numpy as np

    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [jsonable(v) for v in x.tolist()]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        f = float(x)
        if math.isnan(f) or math.isinf(f):
            return repr(f)
        return f
    if isinstance(x, (complex, np.complexfloating)):
        return fmt_complex(x)
    return x


@dataclass
class CheckRecord:
    id: str
    inputs: dict = field(default_factory=dict)
    values: dict = field(default_factory=dict)
    margins: dict = field(default_factory=dict)
    verdict: str = "pass"

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"verdict must be one of {VERDICTS}")

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "inputs": jsonable(self.inputs),
            "values": jsonable(self.values),
            "margins": jsonable(self.margins),
            "verdict": self.verdict,
        }


@dataclass
class VerificationReport:
    suite: str
    records: list = field(default_factory=list)
    config: dict = field(default_factory=dict)

    def add(self, rec: CheckRecord) -> CheckRecord:
        self.records.append(rec)
        return rec

    def check(self, id, ok, *, inputs=None, values=None, margins=None, anomaly=False,
              inconclusive=False) -> CheckRecord:
        verdict = "anomaly" if anomaly else ("pass" if ok else ("inconclusive" if inconclusive else "fail"))
        return self.add(CheckRecord(id, inputs or {}, values or {}, margins or {}, verdict))

    @property
    def verdict(self) -> str:
        vs = [r.verdict for r in self.records]
        if not vs:
            return "inconclusive"
        if all(v == "pass" for v in vs):
            return "pass"
        if "fail" in vs:
            return "fail"
        if "anomaly" in vs:
            return "anomaly"
        return "inconclusive"

    @property
    def ok(self) -> bool:
        return self.verdict == "pass"

    def as_dict(self) -> dict:
        from . import __version__

        return {
            "schema": SCHEMA_VERSION,
            "suite": self.suite,
            "version": __version__,
            "verdict": self.verdict,
            "config": jsonable(self.config),
            "records": [r.as_dict() for r in self.records],
        }

    def to_json(self) -> str:
        return dumps(self.as_dict())


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=False, ensure_ascii=True) + "\n"
