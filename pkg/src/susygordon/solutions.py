"""Named solution constructors and their JSON file schema.

A solution file is a JSON object with a ``kind`` and kind-specific fields:

    {"kind": "trivial", "k": 0}
    {"kind": "darboux1", "k": 0, "lambda0": [1.25, 0.0],
     "a0": "a0" | null, "b0": [0.0, 0.0], "c0": [1.0, 0.0]}
    {"kind": "darboux", "k": 0, "iterations": 2, "mode": "chain",
     "seeds": [{"lambda": [...], "a": "a0" | null, "b": [...], "c": [...]}, ...]}
    {"kind": "backlund_trivial", "k": 0, "k_tilde": 1}
    {"kind": "scaled", "mu": 0.3, "sign": 1, "base": {...any solution...}}

Complex numbers are written as ``[re, im]`` (a bare number is accepted and
read as a real).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .darboux import (
    DarbouxChain,
    SeedParams,
    closed_form_sn,
    darboux_chain,
    generator_set,
    seed_trivial,
)
from .errors import ConfigError
from .grassmann import GeneratorSet
from .ssge import scaling_map
from .superfield import BASE_GENERATORS, Superfield


def parse_complex(value) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(value[0], value[1])
    raise ConfigError(f"expected a number or [re, im] pair, got {value!r}")


def complex_json(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def parse_seed(data: dict) -> SeedParams:
    try:
        lam = parse_complex(data["lambda"])
        c = parse_complex(data["c"])
    except KeyError as missing:
        raise ConfigError(f"seed entry is missing {missing}") from None
    return SeedParams(lam=lam, c=c, b=parse_complex(data.get("b", 0.0)),
                      a=data.get("a"))


def seed_json(p: SeedParams) -> dict:
    return {"lambda": complex_json(p.lam), "a": p.a,
            "b": complex_json(p.b), "c": complex_json(p.c)}


@dataclass
class SolutionBundle:
    """A loaded solution plus whatever companion data its kind provides."""

    kind: str
    s: Superfield
    gens: GeneratorSet
    k: int = 0
    seeds: list[SeedParams] = field(default_factory=list)
    chain: DarbouxChain | None = None
    #: for backlund_trivial: the partner solution and the odd function f = 0
    partner: Superfield | None = None
    odd_function: Superfield | None = None
    spec_echo: dict = field(default_factory=dict)


def _zero_odd(gens: GeneratorSet) -> Superfield:
    from .grassmann import GrassmannElement, ODD

    return Superfield(lambda pt: GrassmannElement.zero(gens), ODD, "f=0")


def build_solution(data: dict) -> SolutionBundle:
    kind = data.get("kind")
    if kind == "trivial":
        k = int(data.get("k", 0))
        gens = GeneratorSet(BASE_GENERATORS)
        return SolutionBundle(kind, seed_trivial(k), gens, k=k, spec_echo=data)

    if kind == "darboux1":
        k = int(data.get("k", 0))
        seed = SeedParams(lam=parse_complex(data["lambda0"]),
                          c=parse_complex(data["c0"]),
                          b=parse_complex(data.get("b0", 0.0)),
                          a=data.get("a0"))
        return build_solution({"kind": "darboux", "k": k, "iterations": 1,
                               "mode": "chain", "seeds": [seed_json(seed)],
                               "_echo": data})

    if kind == "darboux":
        k = int(data.get("k", 0))
        seeds = [parse_seed(entry) for entry in data.get("seeds", [])]
        if not seeds:
            raise ConfigError("darboux solution needs at least one seed")
        n = int(data.get("iterations", len(seeds)))
        mode = data.get("mode", "chain")
        gens = generator_set(seeds)
        chain = darboux_chain(k, seeds, n)
        if mode == "chain":
            s = chain.solution()
        elif mode == "closed-form":
            s = closed_form_sn(k, seeds, n)
        else:
            raise ConfigError(f"unknown darboux mode {mode!r}")
        echo = data.get("_echo", data)
        return SolutionBundle(kind, s, gens, k=k, seeds=seeds, chain=chain,
                              spec_echo={k2: v for k2, v in echo.items() if k2 != "_echo"})

    if kind == "backlund_trivial":
        k = int(data.get("k", 0))
        k_tilde = int(data.get("k_tilde", 0))
        gens = GeneratorSet(BASE_GENERATORS)
        return SolutionBundle(kind, seed_trivial(k), gens, k=k,
                              partner=seed_trivial(k_tilde),
                              odd_function=_zero_odd(gens), spec_echo=data)

    if kind == "scaled":
        base = build_solution(data["base"])
        mu = float(data.get("mu", 0.0))
        sign = int(data.get("sign", 1))
        scaled = scaling_map(base.s, mu, sign)
        return SolutionBundle(kind, scaled, base.gens, k=base.k, seeds=base.seeds,
                              chain=base.chain, spec_echo=data)

    raise ConfigError(f"unknown solution kind {kind!r}")


def load_solution(path: str | Path) -> SolutionBundle:
    with open(path, "r", encoding="utf-8") as handle:
        return build_solution(json.load(handle))
