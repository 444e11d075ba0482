"""Integer Laurent polynomials in one variable ``t``."""

from __future__ import annotations

from typing import Iterable, Mapping

import sympy


class LaurentPoly:
    """Finite map exponent -> nonzero integer coefficient."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, int] | None = None):
        clean: dict[int, int] = {}
        for e, c in (terms or {}).items():
            c = int(c)
            if c:
                clean[int(e)] = clean.get(int(e), 0) + c
        self._terms = {e: c for e, c in sorted(clean.items()) if c}

    @classmethod
    def monomial(cls, exponent: int, coefficient: int = 1) -> "LaurentPoly":
        return cls({exponent: coefficient})

    @classmethod
    def from_coefficients(cls, coeffs: Iterable[int], shift: int = 0) -> "LaurentPoly":
        return cls({i + shift: c for i, c in enumerate(coeffs)})

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        t = sympy.Symbol("t")
        expr = sympy.expand(sympy.sympify(str(text).replace("^", "**"), locals={"t": t}))
        terms: dict[int, int] = {}
        for term in sympy.Add.make_args(expr):
            coeff, rest = term.as_coeff_Mul()
            if rest == 1:
                e = 0
            else:
                base, e = rest.as_base_exp()
                if base != t:
                    raise ValueError(f"not a Laurent polynomial in t: {text!r}")
            if not coeff.is_integer:
                raise ValueError(f"non-integer coefficient in {text!r}")
            terms[int(e)] = terms.get(int(e), 0) + int(coeff)
        return cls(terms)

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def min_exponent(self) -> int:
        return min(self._terms) if self._terms else 0

    def max_exponent(self) -> int:
        return max(self._terms) if self._terms else 0

    def shift(self, k: int) -> "LaurentPoly":
        return LaurentPoly({e + k: c for e, c in self._terms.items()})

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            return LaurentPoly({e: c * other for e, c in self._terms.items()})
        out: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentPoly) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(tuple(self._terms.items()))

    def divides(self, other: "LaurentPoly") -> bool:
        """Divisibility in ``Z[t, t^-1]`` (units are ``+-t^k``)."""
        if self.is_zero():
            return other.is_zero()
        t = sympy.Symbol("t")
        a = sympy.Poly(self._as_poly_expr(t), t, domain="ZZ")
        b = sympy.Poly(other._as_poly_expr(t), t, domain="ZZ")
        q, r = b.div(a)
        return r.is_zero and all(c.is_integer for c in q.all_coeffs())

    def _as_poly_expr(self, t):
        lo = self.min_exponent()
        return sum(c * t ** (e - lo) for e, c in self._terms.items())

    def to_dict(self) -> dict[str, int]:
        return {str(e): c for e, c in self._terms.items()}

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms.items():
            if e == 0:
                mono = str(abs(c))
            else:
                var = "t" if e == 1 else f"t^{e}"
                mono = var if abs(c) == 1 else f"{abs(c)}*{var}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, mono))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, mono in parts[1:]:
            out += f" {sign} {mono}"
        return out

    def __repr__(self) -> str:
        return f"LaurentPoly({str(self)!r})"


ONE = LaurentPoly({0: 1})
T = LaurentPoly({1: 1})
