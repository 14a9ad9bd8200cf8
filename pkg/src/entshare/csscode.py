"""Nested binary codes, syndrome decoding, and the canonical seven-qubit instance.

A CSS code here is a strictly nested pair of classical linear codes
{0} < C2 < C1 < F_2^n.  Bit-flip syndromes are taken against h1 (the parity
check of C1) and phase-flip syndromes against h2 (the parity check of the
dual of C2, i.e. the generator of C2).  Decoding is exact table-based
minimum-weight coset-leader lookup, feasible at the block lengths used here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gf2

_MAX_TABLE_LENGTH = 15

STEANE_PAIR_TEXT = """\
7 4
1000011
0100101
0010110
0001111
7 3
0111100
1011010
1101001
"""


@dataclass(frozen=True, eq=False)
class LinearCode:
    """[n, k] binary linear code with a full-rank generator and its check matrix."""

    n: int
    k: int
    generator: np.ndarray
    check: np.ndarray

    @classmethod
    def from_generator(cls, generator) -> "LinearCode":
        gen = gf2.as_bits(generator)
        if gen.ndim != 2 or gen.shape[0] == 0:
            raise ValueError("generator must be a nonempty 2-d bit matrix")
        k, n = gen.shape
        if gf2.rank(gen) != k:
            raise ValueError("generator matrix must have full row rank")
        check = gf2.nullspace(gen)
        gen = gen.copy()
        gen.setflags(write=False)
        check.setflags(write=False)
        return cls(n, k, gen, check)

    def codewords(self) -> np.ndarray:
        """All 2^k codewords, one per row."""
        if self.k > 20:
            raise ValueError("too many codewords to enumerate")
        coeffs = np.array(
            [gf2.int_to_bits(v, self.k) for v in range(2**self.k)], dtype=np.uint8
        )
        return gf2.matmul(coeffs, self.generator)

    def min_distance(self) -> int:
        words = self.codewords()
        weights = words.sum(axis=1)
        return int(weights[weights > 0].min())


@dataclass(frozen=True, eq=False)
class SyndromeTable:
    """Minimum-weight coset leader for every syndrome of one check matrix."""

    check: np.ndarray
    leaders: np.ndarray

    def leader(self, syndrome_bits) -> np.ndarray:
        bits = gf2.as_bits(syndrome_bits).reshape(-1)
        if bits.size != self.check.shape[0]:
            raise ValueError(
                f"syndrome length {bits.size} does not match {self.check.shape[0]} checks"
            )
        return self.leaders[gf2.bits_to_int(bits)].copy()


def build_syndrome_table(check) -> SyndromeTable:
    check = gf2.as_bits(check)
    n_checks, n = check.shape
    if n > _MAX_TABLE_LENGTH:
        raise ValueError(f"coset-leader tables are limited to block length {_MAX_TABLE_LENGTH}")
    order = sorted(range(2**n), key=lambda v: (bin(v).count("1"), v))
    leaders = np.zeros((2**n_checks, n), dtype=np.uint8)
    found = np.zeros(2**n_checks, dtype=bool)
    remaining = 2**n_checks
    for value in order:
        error = gf2.int_to_bits(value, n)
        key = gf2.bits_to_int(gf2.matmul(check, error.reshape(-1, 1)).reshape(-1))
        if not found[key]:
            leaders[key] = error
            found[key] = True
            remaining -= 1
            if remaining == 0:
                break
    if remaining:
        raise ValueError("check matrix does not reach every syndrome; is it full rank?")
    leaders.setflags(write=False)
    return SyndromeTable(check, leaders)


@dataclass(frozen=True, eq=False)
class CssCode:
    """Validated nested pair with decoding tables and residual-error tests."""

    c1: LinearCode
    c2: LinearCode
    m: int
    t: int
    h1: np.ndarray
    h2: np.ndarray
    bit_table: SyndromeTable
    phase_table: SyndromeTable
    c2_dual_basis: np.ndarray

    def is_trivial_bit_error(self, residual) -> bool:
        """Whether a bit-flip pattern lies in C2 (acts trivially on the encoded pairs)."""
        return not gf2.matmul(self.c2_dual_basis, gf2.as_bits(residual).reshape(-1, 1)).any()

    def is_trivial_phase_error(self, residual) -> bool:
        """Whether a phase-flip pattern lies in the dual of C1."""
        return not gf2.matmul(self.c1.generator, gf2.as_bits(residual).reshape(-1, 1)).any()


def validate_css(c1: LinearCode, c2: LinearCode) -> CssCode:
    """Check strict nesting, derive m and t, and build the decoding tables.

    t comes from exhaustive minimum-distance computation of C1 and of the
    dual of C2: t = floor((min(d(C1), d(C2 dual)) - 1) / 2).
    """
    if c1.n != c2.n:
        raise ValueError(f"block lengths differ: {c1.n} vs {c2.n}")
    if c1.k >= c1.n:
        raise ValueError("C1 must be a proper subspace of the full space")
    for row in c2.generator:
        if not gf2.in_rowspace(row, c1.generator):
            raise ValueError("nesting violated: C2 is not contained in C1")
    m = c1.k - c2.k
    if m < 1:
        raise ValueError("nested pair encodes nothing (m = 0)")
    c2_dual = LinearCode.from_generator(gf2.nullspace(c2.generator))
    t = (min(c1.min_distance(), c2_dual.min_distance()) - 1) // 2
    h2 = c2.generator
    return CssCode(
        c1=c1,
        c2=c2,
        m=m,
        t=t,
        h1=c1.check,
        h2=h2,
        bit_table=build_syndrome_table(c1.check),
        phase_table=build_syndrome_table(h2),
        c2_dual_basis=c2_dual.generator,
    )


def syndrome(check, error_bits) -> np.ndarray:
    """H e^T over GF(2)."""
    check = gf2.as_bits(check)
    error = gf2.as_bits(error_bits).reshape(-1)
    if error.size != check.shape[1]:
        raise ValueError(f"error length {error.size} does not match {check.shape[1]} columns")
    return gf2.matmul(check, error.reshape(-1, 1)).reshape(-1)


def decode(code: CssCode, s_bit, s_phase) -> tuple[np.ndarray, np.ndarray]:
    """Minimum-weight coset leaders for the bit and phase syndromes.

    Always returns leaders; they equal the true errors whenever those have
    weight at most t.
    """
    return code.bit_table.leader(s_bit), code.phase_table.leader(s_phase)


def steane_css() -> CssCode:
    """The [7,4] Hamming code over its dual: n=7, m=1, t=1."""
    c1, c2 = parse_code_pair(STEANE_PAIR_TEXT)
    return validate_css(c1, c2)


def parse_code(lines: list[str], start: int = 0) -> tuple[LinearCode, int]:
    """Parse one code block: a header line "n k" then k rows of 0/1 digits.

    Returns the code and the index of the first unconsumed line.
    """
    if start >= len(lines):
        raise ValueError("unexpected end of code text")
    header = lines[start].split()
    if len(header) != 2:
        raise ValueError(f"expected a header line 'n k', got {lines[start]!r}")
    n, k = int(header[0]), int(header[1])
    rows = []
    for offset in range(k):
        line = lines[start + 1 + offset].strip()
        if len(line) != n or set(line) - {"0", "1"}:
            raise ValueError(f"expected {n} binary digits, got {line!r}")
        rows.append([int(ch) for ch in line])
    return LinearCode.from_generator(rows), start + 1 + k


def parse_code_pair(text: str) -> tuple[LinearCode, LinearCode]:
    """Parse two consecutive code blocks (C1 then C2) from one text."""
    lines = [line for line in text.splitlines() if line.strip()]
    first, nxt = parse_code(lines, 0)
    second, nxt = parse_code(lines, nxt)
    if nxt != len(lines):
        raise ValueError("trailing content after the second code block")
    return first, second


def load_code_pair(path) -> tuple[LinearCode, LinearCode]:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_code_pair(handle.read())


def format_code(code: LinearCode) -> str:
    rows = "\n".join("".join(str(int(b)) for b in row) for row in code.generator)
    return f"{code.n} {code.k}\n{rows}\n"
