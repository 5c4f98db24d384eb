"""Finite fields GF(q^e) with q = 2^s, built as GF(2)[t]/(p(t)).

A single flat modulus of degree m = s*e represents the whole tower: the
base field GF(q), intermediate fields GF(q^k), and GF(q^e) all live as
subsets of one context, recovered through Frobenius fixed points rather
than nested moduli.  Elements are bit patterns of length m over the
power basis.
"""

from __future__ import annotations

import itertools

from . import gf2poly
from .gf2poly import BitPoly, bp_find_irreducible, bp_is_irreducible

# Default ceiling on the absolute degree: exhaustive scans and value
# tables stay within desk-scale memory (~hundreds of MB) below 2^30.
DEGREE_CEILING = 30

_ctx_counter = itertools.count()


class FieldContext:
    """Immutable description of GF(q^e), q = 2^s, with its modulus."""

    __slots__ = ("s", "e", "m", "q", "order", "modulus", "_mod_bits", "_cache", "_token")

    def __init__(self, s: int, e: int, modulus: BitPoly):
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "m", s * e)
        object.__setattr__(self, "q", 1 << s)
        object.__setattr__(self, "order", 1 << (s * e))
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "_mod_bits", modulus.bits)
        object.__setattr__(self, "_cache", {})
        object.__setattr__(self, "_token", next(_ctx_counter))

    def __setattr__(self, name, value):
        raise AttributeError("FieldContext is immutable")

    def element(self, bits: int) -> "FieldElement":
        if not 0 <= bits < self.order:
            raise ValueError(f"bit pattern {bits:#x} out of range for {self}")
        return FieldElement(bits, self)

    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    def one(self) -> "FieldElement":
        return FieldElement(1, self)

    def random_element(self, rng) -> "FieldElement":
        return FieldElement(rng.randrange(self.order), self)

    def __repr__(self) -> str:
        return f"GF({self.q}^{self.e}) mod {self.modulus}"


class FieldElement:
    """Element of a FieldContext as a power-basis bit pattern."""

    __slots__ = ("bits", "ctx")

    def __init__(self, bits: int, ctx: FieldContext):
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "ctx", ctx)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def _check(self, other: "FieldElement"):
        if self.ctx is not other.ctx:
            raise ValueError("operands come from different field contexts")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.bits ^ other.bits, self.ctx)

    __sub__ = __add__

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(
            gf2poly._mod(gf2poly._mul(self.bits, other.bits), self.ctx._mod_bits),
            self.ctx,
        )

    def square(self) -> "FieldElement":
        return FieldElement(
            gf2poly._mod(gf2poly._mul(self.bits, self.bits), self.ctx._mod_bits),
            self.ctx,
        )

    def __pow__(self, n: int) -> "FieldElement":
        if n < 0:
            return self.inv() ** (-n)
        return FieldElement(
            gf2poly._powmod(self.bits, n, self.ctx._mod_bits), self.ctx
        )

    def inv(self) -> "FieldElement":
        if self.bits == 0:
            raise ZeroDivisionError("zero has no inverse")
        # x^(order-2); Lagrange makes this the inverse for x != 0
        return self ** (self.ctx.order - 2)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.ctx is other.ctx and self.bits == other.bits

    def __hash__(self) -> int:
        return hash((self.ctx._token, self.bits))

    def __bool__(self) -> bool:
        return self.bits != 0

    def __repr__(self) -> str:
        return f"0x{self.bits:x}"


def make_field(s: int, e: int, modulus: BitPoly | None = None,
               max_degree: int = DEGREE_CEILING) -> FieldContext:
    """Construct GF((2^s)^e) with the least irreducible modulus of degree s*e.

    An explicit modulus may be supplied; it must be irreducible of degree
    exactly s*e.  Degrees above max_degree are refused because whole-field
    scans and bitsets would outgrow desk-scale memory.
    """
    if s < 1 or e < 1:
        raise ValueError("need s >= 1 and e >= 1")
    m = s * e
    if m > max_degree:
        raise ValueError(
            f"degree {m} = {s}*{e} exceeds ceiling {max_degree}; scans over "
            f"2^{m} elements would exhaust desk-scale memory (raise max_degree "
            f"to override)"
        )
    if modulus is None:
        modulus = bp_find_irreducible(m)
    else:
        if modulus.is_zero or modulus.degree != m:
            raise ValueError(f"modulus must have degree {m}, got {modulus}")
        if not bp_is_irreducible(modulus):
            raise ValueError(f"modulus {modulus} is reducible")
    return FieldContext(s, e, modulus)


def frobenius_q(x: FieldElement, i: int) -> FieldElement:
    """x^(q^i), as s*i successive squarings; i is taken mod e."""
    if i < 0:
        raise ValueError("Frobenius power must be nonnegative")
    i %= x.ctx.e
    y = x
    for _ in range(x.ctx.s * i):
        y = y.square()
    return y


def frob2_inverse(x: FieldElement, j: int) -> FieldElement:
    """The unique y with y^(2^j) = x, namely x^(2^(m - j mod m))."""
    if j < 0:
        raise ValueError("exponent must be nonnegative")
    r = j % x.ctx.m
    if r == 0:
        return x
    y = x
    for _ in range(x.ctx.m - r):
        y = y.square()
    return y


def eval_S(k: int, x: FieldElement) -> FieldElement:
    """S_k(x) = x + x^q + ... + x^(q^(k-1)); the empty sum for k = 0."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    acc = x.ctx.zero()
    y = x
    for _ in range(k):
        acc = acc + y
        y = frobenius_q(y, 1)
    return acc


def trace_to_subfield(x: FieldElement, k: int) -> FieldElement:
    """Trace from GF(q^e) onto GF(q^k): sum of x^(q^(k*i)); requires k | e."""
    ctx = x.ctx
    if k < 1 or ctx.e % k != 0:
        raise ValueError(f"k={k} does not divide e={ctx.e}")
    acc = ctx.zero()
    y = x
    for _ in range(ctx.e // k):
        acc = acc + y
        y = frobenius_q(y, k)
    return acc


def _trace_mask(ctx: FieldContext) -> int:
    """Bit j set iff the absolute trace of the basis element t^j is 1."""
    mask = ctx._cache.get("trace_mask")
    if mask is None:
        mask = 0
        for j in range(ctx.m):
            acc = 0
            y = 1 << j
            for _ in range(ctx.m):
                acc ^= y
                y = gf2poly._mod(gf2poly._mul(y, y), ctx._mod_bits)
            if acc not in (0, 1):
                raise AssertionError("absolute trace left GF(2)")
            mask |= acc << j
        ctx._cache["trace_mask"] = mask
    return mask


def trace_absolute(x: FieldElement) -> int:
    """Absolute trace down to GF(2), returned as a bit."""
    return (x.bits & _trace_mask(x.ctx)).bit_count() & 1


def in_subfield(x: FieldElement, k: int) -> bool:
    """True iff x lies in GF(q^k), i.e. x^(q^k) = x; requires k | e."""
    if k < 1 or x.ctx.e % k != 0:
        raise ValueError(f"k={k} does not divide e={x.ctx.e}")
    return frobenius_q(x, k) == x


def enumerate_elements(ctx: FieldContext, start: int = 0, stop: int | None = None):
    """Yield elements in increasing bit-pattern order over [start, stop)."""
    if stop is None:
        stop = ctx.order
    if not 0 <= start <= stop <= ctx.order:
        raise ValueError("bad enumeration range")
    for bits in range(start, stop):
        yield FieldElement(bits, ctx)


def subfield_elements(ctx: FieldContext, k: int) -> list[FieldElement]:
    """All q^k elements of the subfield GF(q^k), in bit-pattern order."""
    out = [x for x in enumerate_elements(ctx) if in_subfield(x, k)]
    if len(out) != ctx.q ** k:
        raise AssertionError(
            f"subfield GF(q^{k}) has {len(out)} elements, expected {ctx.q ** k}"
        )
    return out
