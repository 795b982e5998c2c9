"""Deterministic fixture models and seeded random generators.

Randomised suites draw coefficients from {-2,-1,1,2} + {-1,0,1}i, keep
term lists at six terms or fewer, and cap bisections at four arrows
(finite models) or cylinder depth four (snake models), which is small
enough for the brute-force oracles yet rich enough to force cancellation
paths.
"""

from __future__ import annotations

import random

from .algebra import AlgebraElement
from .cantor import ClopenSet
from .errors import AxiomError
from .formats import parse_groupoid
from .groupoid import FiniteBisection, SnakeBisection, SnakeGroupoid, TestPoint
from .scalars import QC

_REAL_PALETTE = (-2, -1, 1, 2)
_IMAG_PALETTE = (-1, 0, 1)


def pair_groupoid(units) -> object:
    lines = ["kind: pair", "units: " + " ".join(units)]
    return parse_groupoid("\n".join(lines))


def cyclic_group(n: int) -> object:
    names = [f"g{i}" for i in range(n)]
    lines = ["kind: group", "elements: " + " ".join(names)]
    for i in range(n):
        row = " ".join(names[(i + j) % n] for j in range(n))
        lines.append(f"row {names[i]}: {row}")
    return parse_groupoid("\n".join(lines))


def fixture_models() -> dict:
    """The bundled models every verify run exercises."""
    return {
        "pair2": pair_groupoid(["u", "v"]),
        "pair3": pair_groupoid(["u", "v", "w"]),
        "groupZ2": cyclic_group(2),
        "groupZ4": cyclic_group(4),
        "snakeZ2": SnakeGroupoid(2),
        "snakeZ3": SnakeGroupoid(3),
        "snakeZ5": SnakeGroupoid(5),
        "snakeZ": SnakeGroupoid(None),
    }


def finite_fixtures(models=None) -> list:
    models = models or fixture_models()
    return [m for m in models.values() if m.kind == "finite"]


def snake_fixtures(models=None, *, cyclic_only=True) -> list:
    models = models or fixture_models()
    out = [m for m in models.values() if m.kind == "snake"]
    if cyclic_only:
        out = [m for m in out if m.heads is not None]
    return out


def random_coefficient(rng: random.Random) -> QC:
    return QC(rng.choice(_REAL_PALETTE), rng.choice(_IMAG_PALETTE))


def random_clopen(rng: random.Random, max_depth: int = 4, max_words: int = 3) -> ClopenSet:
    roll = rng.random()
    if roll < 0.1:
        return ClopenSet.full()
    if roll < 0.15:
        return ClopenSet.empty()
    words = []
    for _ in range(rng.randint(1, max_words)):
        depth = rng.randint(1, max_depth)
        words.append("".join(rng.choice("01") for _ in range(depth)))
    return ClopenSet(words)


def random_bisection(model, rng: random.Random, max_arrows: int = 4):
    if model.kind == "finite":
        pool = list(model.arrows)
        rng.shuffle(pool)
        chosen: list = []
        srcs: set = set()
        rngs: set = set()
        for a in pool:
            if len(chosen) >= max_arrows:
                break
            if model.src[a] in srcs or model.rng[a] in rngs:
                continue
            chosen.append(a)
            srcs.add(model.src[a])
            rngs.add(model.rng[a])
            if rng.random() < 0.3:
                break
        return FiniteBisection(model, frozenset(chosen))
    clopen = random_clopen(rng)
    head = 0
    if clopen.contains_base() and rng.random() < 0.5:
        if model.heads is None:
            head = rng.choice([-2, -1, 1, 2])
        else:
            head = rng.randint(1, model.heads - 1)
    return SnakeBisection(model, clopen, head)


def random_sub_bisection(within, rng: random.Random):
    """A random bisection contained in `within` (possibly empty)."""
    model = within.model
    if model.kind == "finite":
        keep = [a for a in sorted(within.arrows) if rng.random() < 0.6]
        return FiniteBisection(model, frozenset(keep))
    clopen = within.clopen & random_clopen(rng)
    if clopen.contains_base():
        if within.head != 0:
            return SnakeBisection(model, clopen, within.head)
        return SnakeBisection(model, clopen, 0)
    return SnakeBisection(model, clopen, 0)


def random_element(model, rng: random.Random, max_terms: int = 6) -> AlgebraElement:
    terms = []
    for _ in range(rng.randint(1, max_terms)):
        terms.append((random_coefficient(rng), random_bisection(model, rng)))
    return AlgebraElement(model, terms)


def random_unit_supported_element(model, rng: random.Random, max_terms: int = 4) -> AlgebraElement:
    unit_bis = model.unit_bisection()
    terms = []
    for _ in range(rng.randint(1, max_terms)):
        terms.append((random_coefficient(rng), random_sub_bisection(unit_bis, rng)))
    return AlgebraElement(model, terms)


def random_single_bisection_element(model, rng: random.Random, max_terms: int = 4):
    """An element whose terms all sit inside one ambient bisection."""
    for _ in range(50):
        ambient = random_bisection(model, rng)
        if not ambient.is_empty():
            break
    else:
        raise AxiomError("could not sample a nonempty ambient bisection")
    terms = []
    for _ in range(rng.randint(1, max_terms)):
        terms.append((random_coefficient(rng), random_sub_bisection(ambient, rng)))
    return AlgebraElement(model, terms), ambient


def random_unit(model, rng: random.Random):
    if model.kind == "finite":
        return TestPoint.arrow(rng.choice(list(model.units)))
    roll = rng.random()
    if roll < 0.4:
        return TestPoint.base()
    word = "".join(rng.choice("01") for _ in range(rng.randint(1, 4)))
    return TestPoint.unit(word)
