"""Wide-range complex scalars, finite sequences, weights, and shift operators.

The constructions routinely produce magnitudes like ``lambda**a`` or ``a!`` with
``a`` in the millions, far beyond double range.  Scalars are therefore stored in
log-polar form ``(log|z|, arg z)`` and every sum is evaluated with max-rescaled
accumulation: subtract the largest log-magnitude, sum in ordinary doubles,
re-encode.
"""
from __future__ import annotations

import cmath
import math
import threading
from typing import Iterable, Iterator, Mapping

import numpy as np
from scipy.special import gammaln

from .errors import WeightError

NEG_INF = float("-inf")
_TWO_PI = 2.0 * math.pi
# decoded re/im entries round-trip cleanly below this; beyond it JSON uses log form
_LOG_JSON_LIMIT = 300.0
# decoded seminorm values overflow double past this
_LOG_OVERFLOW = 709.0


def wrap_phase(phi: float) -> float:
    """Reduce an angle to the principal interval (-pi, pi]."""
    if -math.pi < phi <= math.pi:
        return phi
    phi = math.fmod(phi, _TWO_PI)
    if phi <= -math.pi:
        phi += _TWO_PI
    elif phi > math.pi:
        phi -= _TWO_PI
    return phi


def log_decode(log_val: float) -> float:
    """exp() that saturates to 0.0 / inf instead of raising or wrapping."""
    if log_val == NEG_INF:
        return 0.0
    if log_val > _LOG_OVERFLOW:
        return math.inf
    try:
        return math.exp(log_val)
    except OverflowError:  # pragma: no cover - guarded above
        return math.inf


_HALF_PI = math.pi / 2.0


def _unit(phase: float) -> complex:
    """e^{i phase}, exact on the four half-axes so axis-aligned sums cancel cleanly."""
    if phase == 0.0:
        return 1.0 + 0j
    if phase == math.pi:
        return -1.0 + 0j
    if phase == _HALF_PI:
        return 1j
    if phase == -_HALF_PI:
        return -1j
    return cmath.exp(1j * phase)


def log_sum(terms: Iterable[float]) -> float:
    """log(sum(exp(t))) for nonnegative summands given by their logs."""
    ts = [t for t in terms if t != NEG_INF]
    if not ts:
        return NEG_INF
    m = max(ts)
    if m == math.inf:
        return math.inf
    return m + math.log(math.fsum(math.exp(t - m) for t in ts))


class WideComplex:
    """Complex scalar as (log|z|, arg z); the exact zero has log_mag == -inf.

    Instances are immutable.  Integer powers and the fixed principal m-th root
    are exact in the log domain; ``z**(j/m)`` is always the j-th power of the
    stored m-th root, never a root of a power.
    """

    __slots__ = ("log_mag", "phase")

    def __init__(self, log_mag: float, phase: float = 0.0):
        if log_mag == NEG_INF or log_mag != log_mag:  # NaN log -> zero guard
            object.__setattr__(self, "log_mag", NEG_INF)
            object.__setattr__(self, "phase", 0.0)
        else:
            object.__setattr__(self, "log_mag", float(log_mag))
            object.__setattr__(self, "phase", wrap_phase(float(phase)))

    def __setattr__(self, *_):
        raise AttributeError("WideComplex is immutable")

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls) -> "WideComplex":
        return cls(NEG_INF, 0.0)

    @classmethod
    def one(cls) -> "WideComplex":
        return cls(0.0, 0.0)

    @classmethod
    def from_complex(cls, z: complex) -> "WideComplex":
        z = complex(z)
        if z == 0:
            return cls.zero()
        return cls(math.log(abs(z)), math.atan2(z.imag, z.real))

    @classmethod
    def from_real(cls, x: float) -> "WideComplex":
        if x == 0:
            return cls.zero()
        return cls(math.log(abs(x)), 0.0 if x > 0 else math.pi)

    # -- predicates / accessors ---------------------------------------------
    @property
    def is_zero(self) -> bool:
        return self.log_mag == NEG_INF

    def to_complex(self) -> complex:
        if self.is_zero:
            return 0j
        return log_decode(self.log_mag) * _unit(self.phase)

    def abs_decoded(self) -> float:
        return log_decode(self.log_mag)

    # -- arithmetic ----------------------------------------------------------
    def __mul__(self, other: "WideComplex") -> "WideComplex":
        if self.is_zero or other.is_zero:
            return WideComplex.zero()
        return WideComplex(self.log_mag + other.log_mag, self.phase + other.phase)

    def __truediv__(self, other: "WideComplex") -> "WideComplex":
        if other.is_zero:
            raise ZeroDivisionError("division by exact zero WideComplex")
        if self.is_zero:
            return WideComplex.zero()
        return WideComplex(self.log_mag - other.log_mag, self.phase - other.phase)

    def __neg__(self) -> "WideComplex":
        if self.is_zero:
            return self
        return WideComplex(self.log_mag, self.phase + math.pi)

    def conjugate(self) -> "WideComplex":
        if self.is_zero:
            return self
        return WideComplex(self.log_mag, -self.phase if self.phase != math.pi else math.pi)

    def scale_real(self, x: float) -> "WideComplex":
        return self * WideComplex.from_real(x)

    def powi(self, j: int) -> "WideComplex":
        """Exact integer power (j-fold log/phase scaling)."""
        j = int(j)
        if self.is_zero:
            if j > 0:
                return self
            if j == 0:
                return WideComplex.one()
            raise ZeroDivisionError("negative power of zero")
        if j == 1:
            return self
        return WideComplex(self.log_mag * j, self.phase * j)

    def root(self, m: int) -> "WideComplex":
        """Fixed principal m-th root: phase divided into (-pi/m, pi/m]."""
        m = int(m)
        if m < 1:
            raise ValueError("root order must be >= 1")
        if self.is_zero or m == 1:
            return self
        return WideComplex(self.log_mag / m, self.phase / m)

    def powfrac(self, j: int, m: int) -> "WideComplex":
        """(j/m)-th power as the j-th power of the stored principal m-th root."""
        if j < 1 or m < 1:
            raise ValueError("fractional power needs j >= 1, m >= 1")
        if j == m:
            return self
        return self.root(m).powi(j)

    def __add__(self, other: "WideComplex") -> "WideComplex":
        return WideComplex.sum_of((self, other))

    def __sub__(self, other: "WideComplex") -> "WideComplex":
        return WideComplex.sum_of((self, -other))

    @classmethod
    def sum_of(cls, terms: Iterable["WideComplex"]) -> "WideComplex":
        """Max-rescaled accumulation; exact cancellation yields the exact zero."""
        live = [t for t in terms if not t.is_zero]
        if not live:
            return cls.zero()
        if len(live) == 1:
            return live[0]
        m = max(t.log_mag for t in live)
        acc = 0j
        for t in live:
            acc += math.exp(t.log_mag - m) * _unit(t.phase)
        if acc == 0:
            return cls.zero()
        return cls(m + math.log(abs(acc)), math.atan2(acc.imag, acc.real))

    # -- comparison / io ------------------------------------------------------
    def approx_eq(self, other: "WideComplex", rel: float = 1e-12) -> bool:
        if self.is_zero and other.is_zero:
            return True
        diff = self - other
        if diff.is_zero:
            return True
        scale = max(self.log_mag, other.log_mag)
        if scale == NEG_INF:
            return False
        return diff.log_mag - scale <= math.log(rel)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, WideComplex)
            and self.log_mag == other.log_mag
            and self.phase == other.phase
        )

    def __hash__(self):
        return hash((self.log_mag, self.phase))

    def __repr__(self) -> str:
        if self.is_zero:
            return "WideComplex(0)"
        if abs(self.log_mag) <= _LOG_JSON_LIMIT:
            return f"WideComplex({self.to_complex():.6g})"
        return f"WideComplex(log_mag={self.log_mag:.6g}, phase={self.phase:.6g})"

    def to_json(self):
        """Decoded [re, im] at human scale, {"log_mag","phase"} at extreme scale."""
        if abs(self.log_mag) <= _LOG_JSON_LIMIT or self.is_zero:
            z = self.to_complex()
            return [z.real, z.imag]
        return {"log_mag": self.log_mag, "phase": self.phase}

    @classmethod
    def from_json(cls, data) -> "WideComplex":
        if isinstance(data, dict):
            return cls(float(data["log_mag"]), float(data["phase"]))
        re, im = data
        return cls.from_complex(complex(re, im))


ZERO = WideComplex.zero()
ONE = WideComplex.one()


class FiniteSeq:
    """Finitely supported complex sequence; stored coefficients are nonzero.

    ``horizon`` optionally tags a truncation of an infinite object with the
    construction round it was cut at; exact finite inputs carry ``None``.
    """

    __slots__ = ("_coef", "_indices", "horizon")

    def __init__(self, coef: Mapping[int, WideComplex] | None = None, *, horizon: int | None = None):
        clean = {}
        for n, c in (coef or {}).items():
            n = int(n)
            if n < 0:
                raise ValueError("sequence indices start at 0")
            if not c.is_zero:
                clean[n] = c
        object.__setattr__(self, "_coef", clean)
        object.__setattr__(self, "_indices", tuple(sorted(clean)))
        object.__setattr__(self, "horizon", horizon)

    def __setattr__(self, *_):
        raise AttributeError("FiniteSeq is immutable")

    # -- constructors ---------------------------------------------------------
    @classmethod
    def zero(cls) -> "FiniteSeq":
        return cls({})

    @classmethod
    def basis(cls, n: int, scale: WideComplex = ONE) -> "FiniteSeq":
        return cls({n: scale})

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, complex]]) -> "FiniteSeq":
        out: dict[int, list[WideComplex]] = {}
        for n, z in pairs:
            out.setdefault(int(n), []).append(WideComplex.from_complex(z))
        return cls({n: WideComplex.sum_of(terms) for n, terms in out.items()})

    # -- accessors ------------------------------------------------------------
    @property
    def support(self) -> tuple[int, ...]:
        return self._indices

    def coef(self, n: int) -> WideComplex:
        return self._coef.get(n, ZERO)

    def items(self) -> Iterator[tuple[int, WideComplex]]:
        for n in self._indices:
            yield n, self._coef[n]

    @property
    def is_zero(self) -> bool:
        return not self._indices

    @property
    def max_index(self) -> int:
        if not self._indices:
            raise ValueError("empty sequence has no max_index")
        return self._indices[-1]

    @property
    def min_index(self) -> int:
        if not self._indices:
            raise ValueError("empty sequence has no min_index")
        return self._indices[0]

    def __len__(self) -> int:
        return len(self._indices)

    # -- linear structure -------------------------------------------------------
    def __add__(self, other: "FiniteSeq") -> "FiniteSeq":
        out = dict(self._coef)
        for n, c in other.items():
            if n in out:
                out[n] = out[n] + c
            else:
                out[n] = c
        return FiniteSeq(out)

    def __sub__(self, other: "FiniteSeq") -> "FiniteSeq":
        out = dict(self._coef)
        for n, c in other.items():
            if n in out:
                out[n] = out[n] - c
            else:
                out[n] = -c
        return FiniteSeq(out)

    def __neg__(self) -> "FiniteSeq":
        return FiniteSeq({n: -c for n, c in self.items()})

    def scale(self, factor: WideComplex) -> "FiniteSeq":
        if factor.is_zero:
            return FiniteSeq.zero()
        return FiniteSeq({n: c * factor for n, c in self.items()})

    def with_horizon(self, horizon: int | None) -> "FiniteSeq":
        return FiniteSeq(self._coef, horizon=horizon)

    # -- comparison -------------------------------------------------------------
    def rel_distance(self, other: "FiniteSeq") -> float:
        """sup-norm distance divided by the larger sup-norm (0.0 when both zero)."""
        scale = NEG_INF
        for seq in (self, other):
            for _, c in seq.items():
                scale = max(scale, c.log_mag)
        if scale == NEG_INF:
            return 0.0
        worst = NEG_INF
        for n in set(self._indices) | set(other._indices):
            d = self.coef(n) - other.coef(n)
            if not d.is_zero:
                worst = max(worst, d.log_mag)
        return log_decode(worst - scale) if worst != NEG_INF else 0.0

    def approx_eq(self, other: "FiniteSeq", rel: float = 1e-10) -> bool:
        return self.rel_distance(other) <= rel

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteSeq) and self._coef == other._coef

    def __hash__(self):
        return hash(self._indices)

    def __repr__(self) -> str:
        inner = ", ".join(f"{n}: {c!r}" for n, c in list(self.items())[:6])
        more = " ..." if len(self) > 6 else ""
        return f"FiniteSeq({{{inner}{more}}})"

    # -- io ----------------------------------------------------------------------
    def to_json(self) -> dict:
        coeffs = []
        for n, c in self.items():
            enc = c.to_json()
            if isinstance(enc, list):
                coeffs.append([n, enc[0], enc[1]])
            else:
                coeffs.append([n, enc])
        out = {"coeffs": coeffs}
        if self.horizon is not None:
            out["horizon"] = self.horizon
        return out

    @classmethod
    def from_json(cls, data: dict) -> "FiniteSeq":
        out = {}
        for entry in data["coeffs"]:
            if len(entry) == 3:
                n, re, im = entry
                c = WideComplex.from_complex(complex(re, im))
            else:
                n, payload = entry
                c = WideComplex.from_json(payload)
            if not c.is_zero:
                out[int(n)] = c
        return cls(out, horizon=data.get("horizon"))


def parse_complex_literal(text: str) -> complex:
    """Parse 'a+bi' style literals ('2', '1+2i', '-0.5i', 'i')."""
    cleaned = text.strip().replace(" ", "").replace("i", "j")
    try:
        z = complex(cleaned)
    except ValueError as exc:
        raise WeightError(f"bad complex literal {text!r}") from exc
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise WeightError(f"non-finite complex literal {text!r}")
    return z


def format_complex_literal(z: complex) -> str:
    if z.imag == 0:
        return f"{z.real:g}"
    if z.real == 0:
        return f"{z.imag:g}i"
    return f"{z.real:g}{z.imag:+g}i"


class WeightSpec:
    """Weight sequence w with w_0 = 1 and cached log-products v_n = prod w_k.

    Kinds: ``const`` (w_n = lambda), ``maclane`` (w_n = n for n >= 1), and
    ``table`` (finite explicit list for w_1, w_2, ...).  Log-magnitudes of v_n
    come from per-entry closed forms (n*log|lambda|, log Gamma(n+1)) so there
    is no cumulative rounding for the built-in kinds.
    """

    def __init__(self, kind: str, *, value: complex | None = None, table: list[complex] | None = None):
        if kind not in ("const", "maclane", "table"):
            raise WeightError(f"unknown weight kind {kind!r}")
        self.kind = kind
        self.value = None
        self.table = None
        self._lock = threading.Lock()
        if kind == "const":
            if value is None or value == 0:
                raise WeightError("constant weight must be nonzero")
            self.value = complex(value)
        elif kind == "table":
            if not table:
                raise WeightError("weight table is empty")
            for i, wv in enumerate(table):
                z = complex(wv)
                if z == 0:
                    raise WeightError(f"weight table has zero entry w_{i + 1}", index=i + 1)
                if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                    raise WeightError(f"weight table has non-finite entry w_{i + 1}", index=i + 1)
            self.table = [complex(wv) for wv in table]
        self._log_v = np.zeros(1)
        self._ph_v: np.ndarray | None = None
        self._grow(len(self.table) if kind == "table" else 1024)

    # -- parsing / serialization ------------------------------------------------
    @classmethod
    def parse(cls, spec: str) -> "WeightSpec":
        spec = spec.strip()
        if spec == "maclane":
            return cls("maclane")
        if spec.startswith("const:"):
            return cls("const", value=parse_complex_literal(spec[len("const:"):]))
        if spec.startswith("table:"):
            import json as _json

            path = spec[len("table:"):]
            try:
                with open(path) as fh:
                    raw = _json.load(fh)
            except OSError as exc:
                raise WeightError(f"cannot read weight table {path!r}: {exc}") from exc
            if not isinstance(raw, list):
                raise WeightError("weight table file must hold a JSON list of [re, im] pairs")
            return cls("table", table=[complex(entry[0], entry[1]) for entry in raw])
        raise WeightError(f"bad weight spec {spec!r}; use const:<a+bi>, maclane, or table:<path>")

    def to_json(self) -> dict:
        if self.kind == "const":
            return {"kind": "const", "value": [self.value.real, self.value.imag]}
        if self.kind == "maclane":
            return {"kind": "maclane"}
        return {"kind": "table", "w": [[z.real, z.imag] for z in self.table]}

    @classmethod
    def from_json(cls, data: dict) -> "WeightSpec":
        kind = data["kind"]
        if kind == "const":
            re, im = data["value"]
            return cls("const", value=complex(re, im))
        if kind == "maclane":
            return cls("maclane")
        return cls("table", table=[complex(re, im) for re, im in data["w"]])

    def describe(self) -> str:
        if self.kind == "const":
            return f"const:{format_complex_literal(self.value)}"
        if self.kind == "maclane":
            return "maclane"
        return f"table[{len(self.table)}]"

    # -- cache management ---------------------------------------------------------
    @property
    def max_index(self) -> float:
        return len(self.table) if self.kind == "table" else math.inf

    def _grow(self, upto: int) -> None:
        n = int(upto) + 1
        if n <= len(self._log_v):
            return
        if self.kind == "table" and upto > len(self.table):
            raise WeightError(
                f"weight table of length {len(self.table)} exhausted at index {upto}",
                index=upto,
            )
        size = max(n, 2 * len(self._log_v))
        if self.kind == "const":
            size = min(size, 1 << 27)
            idx = np.arange(size, dtype=np.float64)
            self._log_v = idx * math.log(abs(self.value))
            self._log_v[0] = 0.0
            ph = math.atan2(self.value.imag, self.value.real)
            self._ph_v = None if ph == 0.0 else np.concatenate(([0.0], idx[1:] * ph))
        elif self.kind == "maclane":
            size = min(size, 1 << 27)
            self._log_v = gammaln(np.arange(size, dtype=np.float64) + 1.0)
            self._ph_v = None
        else:
            arr = np.array(self.table, dtype=np.complex128)
            logs = np.concatenate(([0.0], np.log(np.abs(arr))))
            self._log_v = np.cumsum(logs)
            phases = np.angle(arr)
            if np.any(phases != 0.0):
                self._ph_v = np.cumsum(np.concatenate(([0.0], phases)))
            else:
                self._ph_v = None

    def _ensure(self, upto: int) -> None:
        if upto + 1 > len(self._log_v):
            with self._lock:
                self._grow(upto)

    # -- scalar access ---------------------------------------------------------------
    def w(self, n: int) -> WideComplex:
        """w_n (w_0 fixed to 1)."""
        if n < 0:
            raise ValueError("weight index must be >= 0")
        if n == 0:
            return ONE
        if self.kind == "const":
            return WideComplex.from_complex(self.value)
        if self.kind == "maclane":
            return WideComplex.from_real(float(n)) if n >= 1 else ONE
        if n > len(self.table):
            raise WeightError(f"weight table exhausted at index {n}", index=n)
        return WideComplex.from_complex(self.table[n - 1])

    def v_log(self, n: int) -> float:
        self._ensure(n)
        return float(self._log_v[n])

    def v_phase(self, n: int) -> float:
        self._ensure(n)
        return 0.0 if self._ph_v is None else float(self._ph_v[n])

    def v(self, n: int) -> WideComplex:
        """v_n = prod_{k=0}^{n} w_k."""
        return WideComplex(self.v_log(n), wrap_phase(self.v_phase(n)))

    def v_log_array(self, upto: int) -> np.ndarray:
        """Read-only view of log|v_n| for n = 0..upto."""
        self._ensure(upto)
        return self._log_v[: upto + 1]

    def ratio(self, n: int, a: int) -> WideComplex:
        """v_{n+a} / v_n."""
        return self.ratio_root_pow(n, a, 1, 1)

    def ratio_root_pow(self, n: int, a: int, j: int, m: int) -> WideComplex:
        """(w_{n+1}^{1/m} ... w_{n+a}^{1/m})^j with fixed principal roots per factor.

        Computed as the j-th power of the product of m-th roots; for j == m the
        log difference is used unscaled so the round trip through a j = m block
        cancels bit-exactly against ``ratio``.
        """
        if a < 0:
            raise ValueError("shift count must be >= 0")
        if j < 1 or m < 1:
            raise ValueError("fractional power needs j >= 1, m >= 1")
        if a == 0:
            return ONE
        self._ensure(n + a)
        dlog = float(self._log_v[n + a] - self._log_v[n])
        dph = 0.0 if self._ph_v is None else float(self._ph_v[n + a] - self._ph_v[n])
        if j != m:
            dlog = (dlog / m) * j
            dph = (dph / m) * j
        return WideComplex(dlog, wrap_phase(dph))


# -- sequence operations ------------------------------------------------------------


def coordinatewise_product(x: FiniteSeq, y: FiniteSeq) -> FiniteSeq:
    """(xy)_n = x_n * y_n; disjoint supports give the exact zero sequence."""
    out = {}
    small, big = (x, y) if len(x) <= len(y) else (y, x)
    for n, c in small.items():
        d = big.coef(n)
        if not d.is_zero:
            out[n] = c * d
    return FiniteSeq(out)


def coordinatewise_power(x: FiniteSeq, j: int) -> FiniteSeq:
    """Coordinatewise j-th power; equals j-fold coordinatewise_product exactly."""
    if j < 1:
        raise ValueError("coordinatewise power needs j >= 1")
    return FiniteSeq({n: c.powi(j) for n, c in x.items()})


def cauchy_product(x: FiniteSeq, y: FiniteSeq) -> FiniteSeq:
    """Discrete convolution z_n = sum_{k<=n} x_k y_{n-k}."""
    buckets: dict[int, list[WideComplex]] = {}
    for n, c in x.items():
        for k, d in y.items():
            buckets.setdefault(n + k, []).append(c * d)
    return FiniteSeq({n: WideComplex.sum_of(terms) for n, terms in buckets.items()})


def cauchy_power(x: FiniteSeq, m: int) -> FiniteSeq:
    """m-fold Cauchy product; x^0 is the convolution identity e_0."""
    if m < 0:
        raise ValueError("cauchy power needs m >= 0")
    if m == 0:
        return FiniteSeq.basis(0)
    out = x
    for _ in range(m - 1):
        out = cauchy_product(out, x)
    return out


def backward_iterate(w: WeightSpec, x: FiniteSeq, a: int) -> FiniteSeq:
    """a-th power of the weighted backward shift: result_n = (v_{n+a}/v_n) x_{n+a}."""
    if a < 0:
        raise ValueError("shift count must be >= 0")
    if a == 0:
        return x
    out = {}
    for n, c in x.items():
        if n >= a:
            out[n - a] = c * w.ratio(n - a, a)
    return FiniteSeq(out)


def forward_iterate(w: WeightSpec, x: FiniteSeq, a: int) -> FiniteSeq:
    """a-th power of the inverse-weight forward shift: result_{n+a} = (v_n/v_{n+a}) x_n.

    backward_iterate(w, forward_iterate(w, x, a), a) recovers x up to the
    rounding of one log add/sub pair (the two ratios are read from the same
    cached array, so magnitudes cancel symbolically up to 1 ulp of the ratio).
    """
    if a < 0:
        raise ValueError("shift count must be >= 0")
    if a == 0:
        return x
    out = {}
    for n, c in x.items():
        out[n + a] = c / w.ratio(n, a)
    return FiniteSeq(out)


def root_power_block(w: WeightSpec, y: FiniteSeq, a: int, j: int, m: int) -> FiniteSeq:
    """Fractional-power block sum_n (w_{n+1}^{j/m}...w_{n+a}^{j/m})^{-1} y_n^{j/m} e_{n+a}.

    Roots are the fixed principal branches; w^{j/m} is the j-th power of the
    stored w^{1/m}.  Zero coordinates of y contribute 0 (0^{1/m} := 0).  For
    j == m the block is exactly the a-fold inverse-weight forward shift of y,
    so backward_iterate(w, block, a) reproduces y to within one ulp of the
    cached log ratios.
    """
    if j < 1 or m < 1:
        raise ValueError("root power block needs j >= 1, m >= 1")
    out = {}
    for n, c in y.items():
        out[n + a] = c.powfrac(j, m) / w.ratio_root_pow(n, a, j, m)
    return FiniteSeq(out)
