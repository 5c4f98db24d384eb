"""Permutation tests: exhaustive bijection, character sums, shift criterion.

The exhaustive test is the workhorse (linear in the field size); the
additive-character test is quadratic and kept as an independent oracle
for small fields.  Both produce a PPReport.  shift_witness and
kernel_check_case2 instantiate the two case splits used to prove that
the S-power maps permute their fields.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace

import numpy as np

from . import scan
from .field import (FieldContext, FieldElement, eval_S, frobenius_q,
                    subfield_elements, trace_absolute, trace_to_subfield)

EXHAUSTIVE_MAX_ORDER = 1 << 30
CHARSUM_MAX_ORDER = 1 << 12


@dataclass(frozen=True)
class PPReport:
    """Outcome of one permutation test over one field.

    counterexample holds a collision pair (x1, x2) for the exhaustive
    method or a 1-tuple (a,) with a nonzero character sum for charsum;
    witness is the single element serialized into JSON (the value hit
    twice, respectively the character a).
    """

    is_pp: bool
    method: str
    field: str
    witness: FieldElement | None = None
    counterexample: tuple | None = None
    elapsed_ms: int = 0
    note: str | None = None

    def __post_init__(self):
        if self.method not in ("exhaustive", "charsum"):
            raise ValueError(f"unknown method {self.method!r}")
        if not self.is_pp and (self.witness is None or self.counterexample is None):
            raise ValueError("a failing report must carry its counterexample")

    def to_json_obj(self) -> dict:
        obj = {
            "is_pp": self.is_pp,
            "method": self.method,
            "witness": None if self.witness is None else f"0x{self.witness.bits:x}",
            "field": self.field,
            "elapsed_ms": self.elapsed_ms,
        }
        if self.note is not None:
            obj["note"] = self.note
        return obj


def is_pp_exhaustive(f, ctx: FieldContext, workers: int = 1,
                     timing: bool = False) -> PPReport:
    """Decide bijectivity by marking every image value exactly once.

    A duplicated value aborts the marking pass; the collision pair is
    then reconstructed from the value array.
    """
    if ctx.order > EXHAUSTIVE_MAX_ORDER:
        raise ValueError(f"field order {ctx.order} exceeds the exhaustive-scan ceiling")
    t0 = time.perf_counter()
    values = scan.field_values(f, ctx, workers=workers)
    ok, dup = scan.bijection_from_values(values, ctx.order)
    elapsed = int((time.perf_counter() - t0) * 1000) if timing else 0
    if ok:
        return PPReport(True, "exhaustive", repr(ctx), elapsed_ms=elapsed)
    hits = np.flatnonzero(values == np.uint32(dup))[:2]
    pair = (ctx.element(int(hits[0])), ctx.element(int(hits[1])))
    return PPReport(False, "exhaustive", repr(ctx), witness=ctx.element(int(dup)),
                    counterexample=pair, elapsed_ms=elapsed)


def _trace_functional_mask(ctx: FieldContext, a: FieldElement) -> int:
    """Bit mask M with Tr(a*v) = parity(v & M) for every v (trace is F_2-linear)."""
    mask = 0
    for j in range(ctx.m):
        if trace_absolute(a * ctx.element(1 << j)):
            mask |= 1 << j
    return mask


def charsum_single(f, a: FieldElement, ctx: FieldContext, values=None,
                   workers: int = 1) -> int:
    """The signed sum over x of (-1)^Tr(a*f(x)); zero for balanced maps."""
    if a.ctx is not ctx:
        raise ValueError("character element from a different field context")
    if values is None:
        values = scan.field_values(f, ctx, workers=workers)
    mask = np.uint64(_trace_functional_mask(ctx, a))
    ones = 0
    for start, stop in scan.iter_chunks(len(values)):
        bits = values[start:stop].astype(np.uint64) & mask
        ones += int((np.bitwise_count(bits) & np.uint8(1)).sum())
    return len(values) - 2 * ones


def charsum_pp_test(f, ctx: FieldContext, workers: int = 1, timing: bool = False,
                    override_ceiling: bool = False) -> PPReport:
    """PP test via vanishing of all nontrivial additive character sums.

    Quadratic in the field order, so refused above CHARSUM_MAX_ORDER
    unless explicitly overridden.
    """
    if ctx.order > CHARSUM_MAX_ORDER and not override_ceiling:
        raise ValueError(
            f"character-sum test costs order^2; order {ctx.order} exceeds "
            f"{CHARSUM_MAX_ORDER} (pass override_ceiling=True to force)"
        )
    t0 = time.perf_counter()
    values = scan.field_values(f, ctx, workers=workers)
    report = None
    for abits in range(1, ctx.order):
        a = ctx.element(abits)
        if charsum_single(f, a, ctx, values=values) != 0:
            report = PPReport(False, "charsum", repr(ctx), witness=a,
                              counterexample=(a,))
            break
    if report is None:
        report = PPReport(True, "charsum", repr(ctx))
    if timing:
        report = replace(report, elapsed_ms=int((time.perf_counter() - t0) * 1000))
    return report


def shift_witness(g, a: FieldElement, k: int, ctx: FieldContext,
                  workers: int = 1) -> FieldElement | None:
    """First y in GF(q^k)* making Tr(a*(g(x+y)+g(x))) constantly 1.

    Such a y pairs the terms of the character sum of a*g into cancelling
    halves, so the sum vanishes.  Requires the Case-1 hypothesis that a
    has nonzero trace into GF(q^k).  Returns None when no y qualifies.
    """
    if a.ctx is not ctx:
        raise ValueError("a comes from a different field context")
    if k < 1 or ctx.e % k:
        raise ValueError(f"k={k} must divide e={ctx.e}")
    if not trace_to_subfield(a, k):
        raise ValueError("Case-1 hypothesis violated: Tr_(q^e/q^k)(a) = 0")
    gv = scan.field_values(g, ctx, workers=workers).astype(np.uint64)
    mask = np.uint64(_trace_functional_mask(ctx, a))
    for y in subfield_elements(ctx, k):
        if not y.bits:
            continue
        ybits = np.uint64(y.bits)
        constant_one = True
        for start, stop in scan.iter_chunks(ctx.order):
            xs = np.arange(start, stop, dtype=np.uint64)
            diff = gv[xs ^ ybits] ^ gv[start:stop]
            tb = np.bitwise_count(diff & mask) & np.uint8(1)
            if not tb.all():
                constant_one = False
                break
        if constant_one:
            return y
    return None


def kernel_check_case2(k: int, ctx: FieldContext) -> bool:
    """The map z -> sum of z^(q^i) for i = k+1..3k vanishes exactly on GF(q^k).

    That sum equals S_2k(z)^(q^(k+1)), an additive map, so the check runs
    as one matrix scan compared against the subfield membership mask.
    """
    if k < 1 or ctx.e != 3 * k:
        raise ValueError(f"context must be GF(q^(3k)) for k={k}, got {ctx!r}")
    cols = scan.linear_matrix(ctx, lambda z: frobenius_q(eval_S(2 * k, z), k + 1))
    sub = scan.subfield_mask(ctx, k)
    kernel_size = 0
    for start, stop in scan.iter_chunks(ctx.order):
        xs = np.arange(start, stop, dtype=np.uint64)
        in_kernel = scan.apply_matrix(cols, xs) == np.uint64(0)
        if not np.array_equal(in_kernel, sub[start:stop]):
            return False
        kernel_size += int(in_kernel.sum())
    return kernel_size == ctx.q ** k
