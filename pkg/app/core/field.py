"""Exact ground fields: the rationals and large prime fields.

Scalars are plain Python objects so that numpy object arrays can hold them:
``fractions.Fraction`` over ℚ and sympy ``GF(p)`` elements over a prime field.
Matrices built by one Field never mix with another Field's matrices.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Optional, Sequence, Tuple

import numpy as np
import sympy
from sympy import GF, QQ

from app.core.config import MIN_PRIME

logger = logging.getLogger(__name__)


class FieldError(Exception):
    pass


@dataclass(frozen=True)
class Field:
    kind: str = "Q"
    p: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("Q", "GF"):
            raise FieldError(f"Unknown field kind {self.kind!r}")
        if self.kind == "GF":
            if self.p is None or not sympy.isprime(self.p):
                raise FieldError(f"Prime field needs a prime modulus, got {self.p}")
            if self.p <= MIN_PRIME:
                raise FieldError(f"Prime modulus must exceed 2^30, got {self.p}")

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------

    @classmethod
    def rationals(cls) -> "Field":
        return cls("Q")

    @classmethod
    def prime(cls, p: int) -> "Field":
        return cls("GF", int(p))

    @classmethod
    def parse(cls, text: str) -> "Field":
        """Parse ``q`` / ``Q`` or ``fp:PRIME``."""
        spec = text.strip()
        if spec.lower() == "q":
            return cls.rationals()
        if spec.lower().startswith("fp:"):
            try:
                return cls.prime(int(spec[3:]))
            except ValueError as e:
                raise FieldError(f"Bad prime in field spec {text!r}: {e}") from e
        raise FieldError(f"Field spec must be 'q' or 'fp:PRIME', got {text!r}")

    # ------------------------------------------------------------------
    # Scalars
    # ------------------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.kind == "Q"

    @property
    def tag(self) -> str:
        return "Q" if self.is_rational else f"fp:{self.p}"

    @property
    def poly_domain(self):
        return QQ if self.is_rational else GF(self.p, symmetric=False)

    @property
    def zero(self):
        return self.convert(0)

    @property
    def one(self):
        return self.convert(1)

    def convert(self, value: Any):
        if self.is_rational:
            if isinstance(value, Fraction):
                return value
            if isinstance(value, (int, np.integer)):
                return Fraction(int(value))
            if isinstance(value, sympy.Rational):
                return Fraction(int(value.p), int(value.q))
            if isinstance(value, str):
                return self.parse_scalar(value)
            raise FieldError(f"Cannot convert {value!r} to a rational")
        gf = self.poly_domain
        if isinstance(value, Fraction):
            return gf(value.numerator) / gf(value.denominator)
        if isinstance(value, (int, np.integer)):
            return gf(int(value) % self.p)
        if isinstance(value, sympy.Rational):
            return gf(int(value.p) % self.p) / gf(int(value.q) % self.p)
        if isinstance(value, str):
            return self.parse_scalar(value)
        try:
            return gf(int(value) % self.p)
        except (TypeError, ValueError) as e:
            raise FieldError(f"Cannot convert {value!r} to GF({self.p})") from e

    def parse_scalar(self, text: str):
        """Read ``"p/q"``, ``"p"`` or ``"r mod p"``."""
        raw = text.strip()
        try:
            if " mod " in raw:
                residue, modulus = raw.split(" mod ")
                if self.is_rational or int(modulus) != self.p:
                    raise FieldError(f"Scalar {text!r} does not belong to field {self.tag}")
                return self.convert(int(residue))
            return self.convert(Fraction(raw))
        except (ValueError, ZeroDivisionError) as e:
            raise FieldError(f"Malformed scalar {text!r}: {e}") from e

    def format_scalar(self, value: Any) -> str:
        value = self.convert(value)
        if self.is_rational:
            if value.denominator == 1:
                return str(value.numerator)
            return f"{value.numerator}/{value.denominator}"
        return f"{int(value) % self.p} mod {self.p}"

    def to_sympy(self, value: Any):
        value = self.convert(value)
        if self.is_rational:
            return sympy.Rational(value.numerator, value.denominator)
        return sympy.Integer(int(value) % self.p)

    def random_scalar(self, rng: np.random.Generator, bound: int):
        """Integer in [-bound, bound] over ℚ, a uniform residue over GF(p)."""
        if self.is_rational:
            return Fraction(int(rng.integers(-bound, bound + 1)))
        return self.convert(int(rng.integers(0, self.p)))

    # ------------------------------------------------------------------
    # Arrays
    # ------------------------------------------------------------------

    def zeros(self, shape: Tuple[int, int]) -> np.ndarray:
        return np.full(shape, self.zero, dtype=object)

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one
        return out

    def vector(self, values: Iterable[Any]) -> np.ndarray:
        items = [self.convert(v) for v in values]
        out = np.empty(len(items), dtype=object)
        for i, v in enumerate(items):
            out[i] = v
        return out

    def matrix(self, rows: Sequence[Sequence[Any]], shape: Optional[Tuple[int, int]] = None) -> np.ndarray:
        if shape is None:
            shape = (len(rows), len(rows[0]) if rows else 0)
        out = self.zeros(shape)
        if len(rows) != shape[0] or any(len(r) != shape[1] for r in rows):
            raise FieldError(f"Rows do not match declared shape {shape}")
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                out[i, j] = self.convert(v)
        return out

    def coerce(self, a: np.ndarray) -> np.ndarray:
        """Copy of ``a`` with every entry converted into this field."""
        a = np.asarray(a, dtype=object)
        out = np.empty(a.shape, dtype=object)
        for idx in np.ndindex(a.shape):
            out[idx] = self.convert(a[idx])
        return out

    def random_matrix(self, rng: np.random.Generator, shape: Tuple[int, int], bound: int) -> np.ndarray:
        out = self.zeros(shape)
        for idx in np.ndindex(shape):
            out[idx] = self.random_scalar(rng, bound)
        return out


QQ_FIELD = Field.rationals()
