"""Problem model: instances, value vectors, partial assignments.

A symmetric Boolean function on ``n`` variables is stored as its value
vector ``R[0..n]``; ``R[j]`` is the output on every input with exactly ``j``
ones.  Everything downstream (strategies, goal function, oracles) works on
the counts ``N_0(b)`` and ``N_1(b)`` of a partial assignment ``b``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Iterable, Iterator, Sequence

STAR = 2  # an untested slot; also the base-3 digit used for '*'

_FIELDS = ("n", "value_vector", "costs", "probs")


class InstanceError(ValueError):
    """Malformed instance document or invalid model object."""


@dataclass(frozen=True)
class Instance:
    """Test costs ``c_i > 0`` and probabilities ``p_i = P(x_i = 1)``."""

    costs: tuple[float, ...]
    probs: tuple[float, ...]

    def __post_init__(self):
        costs = tuple(float(c) for c in self.costs)
        probs = tuple(float(p) for p in self.probs)
        if not costs:
            raise InstanceError("n: instance must have at least one variable")
        if len(costs) != len(probs):
            raise InstanceError(
                f"probs: expected {len(costs)} entries to match costs, got {len(probs)}"
            )
        for i, c in enumerate(costs):
            if not (c > 0 and math.isfinite(c)):
                raise InstanceError(f"costs[{i}]: cost must be positive and finite, got {c!r}")
        for i, p in enumerate(probs):
            if not 0.0 < p < 1.0:
                raise InstanceError(f"probs[{i}]: probability out of open interval (0, 1), got {p!r}")
        object.__setattr__(self, "costs", costs)
        object.__setattr__(self, "probs", probs)

    @property
    def n(self) -> int:
        return len(self.costs)

    @cached_property
    def order_or(self) -> tuple[int, ...]:
        # sorted() is stable, so equal ratios keep ascending index order
        return tuple(sorted(range(self.n), key=lambda i: self.costs[i] / self.probs[i]))

    @cached_property
    def order_and(self) -> tuple[int, ...]:
        return tuple(sorted(range(self.n), key=lambda i: self.costs[i] / (1.0 - self.probs[i])))


@dataclass(frozen=True)
class Block:
    start: int
    length: int
    value: int

    @property
    def stop(self) -> int:
        return self.start + self.length


@dataclass(frozen=True)
class ValueVector:
    """Value vector ``R[0..n]`` of a symmetric function and its blocks.

    Blocks are numbered from 1 to match the usual ``alpha_1 .. alpha_B``
    convention; ``alphas`` holds ``alpha_1 .. alpha_{B+1}`` with the
    sentinel ``alpha_{B+1} = n + 1``.
    """

    entries: tuple[int, ...]
    blocks: tuple[Block, ...] = field(init=False, repr=False, compare=False)
    _block_id: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        entries = tuple(self.entries)
        if not entries:
            raise InstanceError("value_vector: must have at least one entry")
        for j, r in enumerate(entries):
            if r not in (0, 1):
                raise InstanceError(f"value_vector[{j}]: entry must be 0 or 1, got {r!r}")
        entries = tuple(int(r) for r in entries)
        blocks = decompose_blocks(entries)
        block_id = []
        for j, blk in enumerate(blocks, start=1):
            block_id.extend([j] * blk.length)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "_block_id", tuple(block_id))

    @classmethod
    def k_of_n(cls, n: int, k: int) -> ValueVector:
        """1 iff at least ``k`` inputs are 1."""
        return cls(tuple(int(j >= k) for j in range(n + 1)))

    @classmethod
    def exactly_k(cls, n: int, k: int) -> ValueVector:
        return cls(tuple(int(j == k) for j in range(n + 1)))

    @classmethod
    def parity(cls, n: int, negate: bool = False) -> ValueVector:
        return cls(tuple((j + negate) % 2 for j in range(n + 1)))

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, j):
        return self.entries[j]

    @property
    def n(self) -> int:
        return len(self.entries) - 1

    @property
    def B(self) -> int:
        return len(self.blocks)

    @property
    def alphas(self) -> tuple[int, ...]:
        return tuple(b.start for b in self.blocks) + (self.n + 1,)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(b.length for b in self.blocks)

    def block_index(self, pos: int) -> int:
        """1-based block containing position ``pos`` of R."""
        return self._block_id[pos]

    @property
    def is_constant(self) -> bool:
        return self.B == 1

    def k_of_n_threshold(self) -> int | None:
        """``k`` if this is a (possibly negated) k-of-n vector, else None."""
        if self.B != 2:
            return None
        return self.blocks[1].start

    def exactly_k_target(self) -> int | None:
        """Position of the lone odd entry for exactly-k vectors and negations."""
        ones = [j for j, r in enumerate(self.entries) if r == 1]
        zeros = [j for j, r in enumerate(self.entries) if r == 0]
        if len(ones) == 1 and self.n >= 1:
            return ones[0]
        if len(zeros) == 1 and self.n >= 1:
            return zeros[0]
        return None

    @property
    def is_parity(self) -> bool:
        """Parity or its complement: every entry is its own block."""
        return self.B == self.n + 1


def decompose_blocks(entries: Sequence[int]) -> tuple[Block, ...]:
    """Split R into maximal runs of equal entries."""
    if len(entries) == 0:
        raise InstanceError("value_vector: must have at least one entry")
    blocks = []
    start = 0
    for j in range(1, len(entries) + 1):
        if j == len(entries) or entries[j] != entries[start]:
            blocks.append(Block(start, j - start, int(entries[start])))
            start = j
    return tuple(blocks)


@dataclass(frozen=True)
class PartialAssignment:
    """Vector over {0, 1, *}; ``*`` is stored as :data:`STAR`."""

    slots: tuple[int, ...]

    def __post_init__(self):
        slots = tuple(int(s) for s in self.slots)
        for i, s in enumerate(slots):
            if s not in (0, 1, STAR):
                raise InstanceError(f"slots[{i}]: must be 0, 1 or *, got {s!r}")
        object.__setattr__(self, "slots", slots)

    @classmethod
    def empty(cls, n: int) -> PartialAssignment:
        return cls((STAR,) * n)

    @classmethod
    def parse(cls, text: str) -> PartialAssignment:
        """Build from a string such as ``"11*0"``."""
        table = {"0": 0, "1": 1, "*": STAR}
        try:
            return cls(tuple(table[ch] for ch in text if not ch.isspace() and ch != ","))
        except KeyError as exc:
            raise InstanceError(f"partial assignment: bad symbol {exc.args[0]!r}") from None

    @classmethod
    def from_base3(cls, code: int, n: int) -> PartialAssignment:
        slots = []
        for _ in range(n):
            code, d = divmod(code, 3)
            slots.append(d)
        if code:
            raise InstanceError(f"base-3 code too large for n={n}")
        return cls(tuple(slots))

    def to_base3(self) -> int:
        """Canonical integer key: slot ``i`` is base-3 digit ``i``."""
        code = 0
        for s in reversed(self.slots):
            code = 3 * code + s
        return code

    def __len__(self) -> int:
        return len(self.slots)

    def __getitem__(self, i: int) -> int:
        return self.slots[i]

    def __str__(self) -> str:
        return "".join("*" if s == STAR else str(s) for s in self.slots)

    @cached_property
    def n0(self) -> int:
        return self.slots.count(0)

    @cached_property
    def n1(self) -> int:
        return self.slots.count(1)

    @property
    def n_tested(self) -> int:
        return self.n0 + self.n1

    def is_tested(self, i: int) -> bool:
        return self.slots[i] != STAR

    def untested(self) -> list[int]:
        return [i for i, s in enumerate(self.slots) if s == STAR]

    @property
    def is_full(self) -> bool:
        return STAR not in self.slots

    @property
    def tested_mask(self) -> int:
        return sum(1 << i for i, s in enumerate(self.slots) if s != STAR)

    def assign(self, i: int, bit: int) -> PartialAssignment:
        if self.slots[i] != STAR:
            raise InstanceError(f"variable x{i + 1} is already assigned")
        if bit not in (0, 1):
            raise InstanceError(f"bit must be 0 or 1, got {bit!r}")
        return PartialAssignment(self.slots[:i] + (bit,) + self.slots[i + 1:])

    def extends(self, other: PartialAssignment) -> bool:
        """``self ⪰ other``: agrees with every determined slot of ``other``."""
        return all(o == STAR or s == o for s, o in zip(self.slots, other.slots))

    def completions(self) -> Iterator[tuple[int, ...]]:
        """All full assignments extending this one."""
        free = self.untested()
        base = list(self.slots)
        for k in range(1 << len(free)):
            for t, i in enumerate(free):
                base[i] = (k >> t) & 1
            yield tuple(base)


@dataclass(frozen=True)
class InducedFunction:
    """Restriction of ``base`` by a partial assignment: the window R[lo..hi]."""

    base: ValueVector
    lo: int
    hi: int

    @classmethod
    def of(cls, b: PartialAssignment, R: ValueVector) -> InducedFunction:
        if len(b) != R.n:
            raise InstanceError(f"partial assignment has {len(b)} slots, function has n={R.n}")
        return cls(R, b.n1, R.n - b.n0)

    @property
    def entries(self) -> tuple[int, ...]:
        return self.base.entries[self.lo:self.hi + 1]

    @property
    def is_constant(self) -> bool:
        return self.base.block_index(self.lo) == self.base.block_index(self.hi)

    def value_vector(self) -> ValueVector:
        return ValueVector(self.entries)


def is_certificate(b: PartialAssignment, R: ValueVector) -> tuple[bool, int | None]:
    """Whether ``b`` fixes the value of f, and that value when it does.

    The certified output is ``R[N_1(b)]``.
    """
    induced = InducedFunction.of(b, R)
    if induced.is_constant:
        return True, R[induced.lo]
    return False, None


def assignment_probability(x: Sequence[int], inst: Instance) -> float:
    if len(x) != inst.n:
        raise InstanceError(f"assignment has {len(x)} entries, instance has n={inst.n}")
    prob = 1.0
    for xi, pi in zip(x, inst.probs):
        prob *= pi if xi else 1.0 - pi
    return prob


def block_of(x: Sequence[int], R: ValueVector) -> int:
    """1-based block ``j`` with ``alpha_j <= N_1(x) < alpha_{j+1}``."""
    if len(x) != R.n:
        raise InstanceError(f"assignment has {len(x)} entries, function has n={R.n}")
    return R.block_index(sum(x))


def evaluate(x: Sequence[int], R: ValueVector) -> int:
    """f(x), read off the block that ``x`` belongs to."""
    return R.blocks[block_of(x, R) - 1].value


def all_assignments(n: int) -> Iterator[tuple[int, ...]]:
    """Full cube in increasing integer order, bit ``i`` of the index -> x_i."""
    for k in range(1 << n):
        yield tuple((k >> i) & 1 for i in range(n))


# -- instance documents -----------------------------------------------------

def _require_list(doc: dict, name: str) -> list:
    value = doc[name]
    if not isinstance(value, list):
        raise InstanceError(f"{name}: expected a list, got {type(value).__name__}")
    return value


def parse_instance(raw: str | bytes | dict[str, Any]) -> tuple[Instance, ValueVector]:
    """Validate an instance document and build the model objects.

    ``raw`` is either the JSON text or an already decoded mapping with the
    fields ``n``, ``value_vector``, ``costs`` and ``probs``.
    """
    if isinstance(raw, (str, bytes)):
        try:
            doc = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise InstanceError(f"document is not valid JSON: {exc}") from None
    else:
        doc = raw
    if not isinstance(doc, dict):
        raise InstanceError("document must be a JSON object")
    for name in _FIELDS:
        if name not in doc:
            raise InstanceError(f"{name}: missing field")

    n = doc["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InstanceError(f"n: must be a positive integer, got {n!r}")
    entries = _require_list(doc, "value_vector")
    costs = _require_list(doc, "costs")
    probs = _require_list(doc, "probs")

    if len(entries) != n + 1:
        raise InstanceError(
            f"value_vector: value vector must have n+1 entries ({n + 1}), got {len(entries)}"
        )
    for j, r in enumerate(entries):
        if isinstance(r, bool) or r not in (0, 1):
            raise InstanceError(f"value_vector[{j}]: entry must be 0 or 1, got {r!r}")
    for name, values in (("costs", costs), ("probs", probs)):
        if len(values) != n:
            raise InstanceError(f"{name}: must have n entries ({n}), got {len(values)}")
        for i, v in enumerate(values):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise InstanceError(f"{name}[{i}]: must be a number, got {v!r}")
    for i, p in enumerate(probs):
        if not 0.0 < p < 1.0:
            raise InstanceError(f"probs[{i}]: probability out of open interval (0, 1), got {p!r}")
    for i, c in enumerate(costs):
        if not (c > 0 and math.isfinite(c)):
            raise InstanceError(f"costs[{i}]: cost must be positive and finite, got {c!r}")

    return Instance(tuple(costs), tuple(probs)), ValueVector(tuple(entries))


def load_instance(path: str | Path) -> tuple[Instance, ValueVector]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InstanceError(f"cannot read instance file {path}: {exc.strerror}") from None
    return parse_instance(text)


def dump_instance(inst: Instance, R: ValueVector) -> str:
    """Serialize in the canonical field order (n, value_vector, costs, probs)."""
    if R.n != inst.n:
        raise InstanceError(f"value_vector: value vector must have n+1 entries ({inst.n + 1}), got {len(R)}")
    doc = {
        "n": inst.n,
        "value_vector": list(R.entries),
        "costs": list(inst.costs),
        "probs": list(inst.probs),
    }
    return json.dumps(doc) + "\n"


def reference_instance_path() -> Path:
    """Path of the shipped four-variable example with R = [0,1,1,0,0]."""
    return Path(__file__).with_name("data") / "paper.json"


def iter_value_vectors(n: int) -> Iterable[ValueVector]:
    """Every value vector on ``n`` variables (``2**(n+1)`` of them)."""
    for k in range(1 << (n + 1)):
        yield ValueVector(tuple((k >> j) & 1 for j in range(n + 1)))
