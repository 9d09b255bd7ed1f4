"""Partial Boolean functions on small domains, plus the named-function catalog.

A :class:`PartialFunction` stores an explicit truth table ``entries`` mapping
:class:`BitString` keys of length ``n`` to values in ``{0, 1}``.  The zero and
one preimages are exposed as ``d0`` and ``d1``.

Position convention: coordinates ``j`` in public APIs are 1-based (``1..n``);
Python-level sequence indexing of :class:`BitString` is 0-based.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

import numpy as np

# General functions are capped at 12 bits (4096-entry tables); indexing
# functions go up to arity 20 (address 4 + data 16).
MAX_GENERAL_ARITY = 12
MAX_ARITY = 20

NAMED_FUNCTIONS = ("AND", "OR", "PARITY", "MAJ", "XOR2")


class BoolFnError(ValueError):
    """Base error for function construction and evaluation."""


class ArityError(BoolFnError):
    """Arity outside the supported range, or incompatible with the name."""


class DomainError(BoolFnError):
    """Evaluation point outside the declared domain."""


class FunctionFormatError(BoolFnError):
    """Malformed function file."""


@dataclass(frozen=True, order=True)
class BitString:
    """Fixed-length sequence of bits."""

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.bits) == 0:
            raise BoolFnError("empty bit string")
        if any(b not in (0, 1) for b in self.bits):
            raise BoolFnError(f"bits must be 0/1, got {self.bits!r}")

    @classmethod
    def from_text(cls, text: str) -> "BitString":
        if not text or any(c not in "01" for c in text):
            raise BoolFnError(f"invalid bit string {text!r}")
        return cls(tuple(int(c) for c in text))

    @classmethod
    def coerce(cls, value: "BitString | str | Iterable[int]") -> "BitString":
        if isinstance(value, BitString):
            return value
        if isinstance(value, str):
            return cls.from_text(value)
        return cls(tuple(int(v) for v in value))

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)

    def __len__(self) -> int:
        return len(self.bits)

    def __getitem__(self, i: int) -> int:
        return self.bits[i]

    def __iter__(self) -> Iterator[int]:
        return iter(self.bits)

    def flip(self, block: Iterable[int]) -> "BitString":
        """Flip the (1-based) positions in ``block``."""
        out = list(self.bits)
        for j in block:
            if not 1 <= j <= len(out):
                raise BoolFnError(f"position {j} out of range 1..{len(out)}")
            out[j - 1] ^= 1
        return BitString(tuple(out))

    def diff_positions(self, other: "BitString") -> tuple[int, ...]:
        """1-based positions where the two strings differ."""
        if len(other) != len(self):
            raise BoolFnError("length mismatch")
        return tuple(j + 1 for j, (a, b) in enumerate(zip(self.bits, other.bits)) if a != b)


def all_bitstrings(n: int) -> Iterator[BitString]:
    """All length-n bit strings in lexicographic (MSB-first) order."""
    for k in range(1 << n):
        yield BitString(tuple((k >> (n - 1 - i)) & 1 for i in range(n)))


class PartialFunction:
    """Truth table of ``f: D -> {0,1}`` with ``D`` a subset of length-n strings.

    Immutable after construction; safe for concurrent reads.
    """

    __slots__ = ("name", "n", "total", "_entries", "_hash", "_array_cache")

    def __init__(
        self,
        name: str,
        n: int,
        entries: Mapping[BitString, int] | Iterable[tuple[BitString | str, int]],
        total: bool = False,
    ) -> None:
        if not 1 <= n <= MAX_ARITY:
            raise ArityError(f"arity {n} outside 1..{MAX_ARITY}")
        items = entries.items() if isinstance(entries, Mapping) else entries
        table: dict[BitString, int] = {}
        for key, val in items:
            bs = BitString.coerce(key)
            if len(bs) != n:
                raise FunctionFormatError(f"key {bs} has length {len(bs)}, expected {n}")
            if val not in (0, 1):
                raise FunctionFormatError(f"value for {bs} must be 0/1, got {val!r}")
            if bs in table:
                raise FunctionFormatError(f"duplicate key {bs}")
            table[bs] = int(val)
        if not table:
            raise FunctionFormatError("empty domain")
        if total and len(table) != 1 << n:
            raise FunctionFormatError(
                f"function flagged total has {len(table)} of {1 << n} entries"
            )
        self.name = name
        self.n = n
        self.total = bool(total)
        self._entries = dict(sorted(table.items()))
        self._hash: int | None = None
        self._array_cache: tuple[np.ndarray, np.ndarray] | None = None

    @property
    def entries(self) -> Mapping[BitString, int]:
        return MappingProxyType(self._entries)

    @property
    def d0(self) -> tuple[BitString, ...]:
        return tuple(x for x, v in self._entries.items() if v == 0)

    @property
    def d1(self) -> tuple[BitString, ...]:
        return tuple(x for x, v in self._entries.items() if v == 1)

    def __contains__(self, x: object) -> bool:
        try:
            return BitString.coerce(x) in self._entries  # type: ignore[arg-type]
        except (BoolFnError, TypeError):
            return False

    def value(self, x: BitString | str) -> int:
        bs = BitString.coerce(x)
        try:
            return self._entries[bs]
        except KeyError:
            raise DomainError(f"{bs} not in the domain of {self.name}") from None

    def domain(self) -> tuple[BitString, ...]:
        return tuple(self._entries)

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Domain as a (m, n) uint8 bit matrix and an (m,) value vector."""
        if self._array_cache is None:
            bits = np.array([x.bits for x in self._entries], dtype=np.uint8)
            vals = np.array(list(self._entries.values()), dtype=np.uint8)
            self._array_cache = (bits, vals)
        return self._array_cache

    def opposite_inputs(self, x: BitString | str) -> tuple[BitString, ...]:
        """All domain points with function value different from f(x)."""
        fx = self.value(x)
        return tuple(y for y, v in self._entries.items() if v != fx)

    def serialize(self) -> str:
        payload = {
            "name": self.name,
            "n": self.n,
            "total": self.total,
            "entries": [[str(x), v] for x, v in self._entries.items()],
        }
        return json.dumps(payload, sort_keys=True)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PartialFunction):
            return NotImplemented
        return (
            self.name == other.name
            and self.n == other.n
            and self.total == other.total
            and self._entries == other._entries
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.name, self.n, self.total, tuple(self._entries.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"PartialFunction({self.name!r}, n={self.n}, |D|={len(self._entries)})"


def make_named(name: str, n: int) -> PartialFunction:
    """Standard total function by name: AND, OR, PARITY, MAJ (odd n), XOR2."""
    name = name.upper()
    if name not in NAMED_FUNCTIONS:
        raise BoolFnError(f"unknown function name {name!r}")
    if name == "XOR2":
        if n != 2:
            raise ArityError("XOR2 requires n = 2")
        rule = lambda bits: (bits[0] + bits[1]) % 2
    elif name == "MAJ":
        if n % 2 == 0 or n < 1:
            raise ArityError("MAJ requires odd n")
        rule = lambda bits: int(2 * sum(bits) > n)
    elif name == "AND":
        rule = lambda bits: int(all(bits))
    elif name == "OR":
        rule = lambda bits: int(any(bits))
    else:  # PARITY
        rule = lambda bits: sum(bits) % 2
    if not 1 <= n <= MAX_GENERAL_ARITY:
        raise ArityError(f"arity {n} outside 1..{MAX_GENERAL_ARITY}")
    entries = {x: rule(x.bits) for x in all_bitstrings(n)}
    return PartialFunction(f"{name}_{n}", n, entries, total=True)


def make_indexing(n: int) -> PartialFunction:
    """Indexing function on n address bits followed by 2^n data bits.

    The address block is read MSB-first and selects (1-based) data position
    ``int(address, 2) + 1``; the output is that data bit.
    """
    if not 1 <= n <= 4:
        raise ArityError(f"indexing arity {n} outside 1..4")
    arity = n + (1 << n)
    entries = {}
    for x in all_bitstrings(arity):
        addr = int("".join(str(b) for b in x.bits[:n]), 2)
        entries[x] = x.bits[n + addr]
    return PartialFunction(f"IND_{n}", arity, entries, total=True)


def load_function(text: str) -> PartialFunction:
    """Parse the JSON function-file format and validate all invariants."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FunctionFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise FunctionFormatError("function file must be a JSON object")
    for field, kind in (("name", str), ("n", int), ("total", bool), ("entries", list)):
        if field not in payload or not isinstance(payload[field], kind):
            raise FunctionFormatError(f"missing or malformed field {field!r}")
    pairs = []
    for item in payload["entries"]:
        if not (isinstance(item, list) and len(item) == 2 and isinstance(item[0], str)):
            raise FunctionFormatError(f"malformed entry {item!r}")
        pairs.append((item[0], item[1]))
    return PartialFunction(payload["name"], payload["n"], pairs, total=payload["total"])


def catalog(max_arity: int = MAX_GENERAL_ARITY) -> tuple[PartialFunction, ...]:
    """The named functions exercised throughout the test and verify suites."""
    out: list[PartialFunction] = []
    for n in range(2, 7):
        for nm in ("AND", "OR", "PARITY"):
            out.append(make_named(nm, n))
    out.append(make_named("XOR2", 2))
    out.append(make_named("MAJ", 3))
    out.append(make_named("MAJ", 5))
    out.append(make_indexing(1))
    out.append(make_indexing(2))
    return tuple(f for f in out if f.n <= max_arity)
