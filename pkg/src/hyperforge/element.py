"""Polynomial elements of the algebra generated by the construction outputs."""
from __future__ import annotations

from dataclasses import dataclass

from .core import format_complex_literal
from .errors import ElementError

_COEF_EPS = 0.0  # exact-zero coefficients are dropped, nothing else


@dataclass(frozen=True)
class AlgebraElement:
    """A polynomial sum c_beta * (x1^beta_1) ... (xK^beta_K) with no constant term.

    ``coeffs`` maps exponent multi-indices (tuples over the K generators) to
    complex coefficients.  The all-zero multi-index is rejected: the algebra
    statements concern non-constant polynomials only.
    """

    coeffs: dict[tuple[int, ...], complex]
    num_generators: int

    def __post_init__(self):
        if self.num_generators < 1:
            raise ElementError("element needs at least one generator slot")
        clean = {}
        for beta, c in self.coeffs.items():
            beta = tuple(int(b) for b in beta)
            if len(beta) != self.num_generators:
                raise ElementError(
                    f"exponent tuple {beta} does not match {self.num_generators} generators"
                )
            if any(b < 0 for b in beta):
                raise ElementError("exponents must be nonnegative")
            c = complex(c)
            if c == 0:
                continue
            if sum(beta) == 0:
                raise ElementError("constant term present; algebra elements must vanish at 0")
            clean[beta] = clean.get(beta, 0) + c
        clean = {b: c for b, c in clean.items() if c != 0}
        if not clean:
            raise ElementError("element has no nonzero term")
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def from_terms(cls, terms, num_generators: int | None = None) -> "AlgebraElement":
        """Build from (coefficient, beta) pairs, padding betas to a common width."""
        terms = list(terms)
        width = num_generators or max((len(b) for _, b in terms), default=0)
        merged: dict[tuple[int, ...], complex] = {}
        for c, beta in terms:
            beta = tuple(beta) + (0,) * (width - len(beta))
            merged[beta] = merged.get(beta, 0) + complex(c)
        return cls(merged, width)

    @classmethod
    def univariate(cls, coeffs_by_degree: dict[int, complex]) -> "AlgebraElement":
        return cls({(d,): c for d, c in coeffs_by_degree.items()}, 1)

    @property
    def degree_min(self) -> int:
        return min(sum(b) for b in self.coeffs)

    @property
    def degree_max(self) -> int:
        return max(sum(b) for b in self.coeffs)

    def scaled(self, factor: complex) -> "AlgebraElement":
        if factor == 0:
            raise ElementError("cannot scale an element by zero")
        return AlgebraElement({b: c * factor for b, c in self.coeffs.items()}, self.num_generators)

    def top_form(self) -> dict[tuple[int, ...], complex]:
        """Coefficients of the highest total degree."""
        m = self.degree_max
        return {b: c for b, c in self.coeffs.items() if sum(b) == m}

    def homogeneous_coeffs(self, degree: int) -> dict[tuple[int, ...], complex]:
        return {b: c for b, c in self.coeffs.items() if sum(b) == degree}

    def to_json(self) -> dict:
        return {
            "generators": self.num_generators,
            "terms": [
                {"beta": list(b), "coef": [c.real, c.imag]}
                for b, c in sorted(self.coeffs.items())
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "AlgebraElement":
        return cls(
            {tuple(t["beta"]): complex(t["coef"][0], t["coef"][1]) for t in data["terms"]},
            data["generators"],
        )

    def describe(self) -> str:
        parts = []
        for beta, c in sorted(self.coeffs.items()):
            mono = "*".join(
                f"x{k + 1}" + (f"^{e}" if e > 1 else "") for k, e in enumerate(beta) if e > 0
            )
            parts.append(mono if c == 1 else f"({format_complex_literal(c)})*{mono}")
        return " + ".join(parts)
