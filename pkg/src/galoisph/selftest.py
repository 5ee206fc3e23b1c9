"""Randomized identity checks behind ``galoisph selftest``."""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import diagram as dg
from . import generators as gen
from . import matching as mt
from . import mobius as mob
from .pmod import pad_presentation
from .poset import chain


@dataclass
class SelftestReport:
    seed: int
    counts: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, name: str, passed: bool, detail=None) -> None:
        done, bad = self.counts.get(name, (0, 0))
        self.counts[name] = (done + 1, bad + (not passed))
        if not passed:
            self.failures.append((name, detail))

    def text(self) -> str:
        out = [f"seed {self.seed}"]
        for name, (done, bad) in self.counts.items():
            out.append(f"{'PASS' if not bad else 'FAIL'} {name} {done - bad}/{done}")
        for name, detail in self.failures[:5]:
            out.append(f"  first failure in {name}: {detail!r}")
        return "\n".join(out)


def run_selftest(seed: int = 0, iters: int = 50, field: int = 2) -> SelftestReport:
    rng = random.Random(seed)
    rep = SelftestReport(seed)
    for _ in range(iters):
        c = gen.random_galois_connection(rng, 8)
        m = gen.random_intfn(rng, c.source)
        chk = mob.rgct_check(c, m)
        rep.record("rgct", bool(chk), chk.witness)

        p = gen.random_poset(rng, rng.randint(1, 8))
        fn = gen.random_intfn(rng, p)
        rep.record("roundtrip", mob.mobius_invert(mob.zeta_transform(fn)) == fn
                   and mob.zeta_transform(mob.mobius_invert(fn)) == fn)

        p = gen.random_poset(rng, rng.randint(1, 6))
        mod = gen.random_module_bounded(rng, p, field)
        pres = pad_presentation(dg.build_free_presentation(mod),
                                gen.random_padding(rng, mod, rng.randint(0, 2)))
        ok = dg.diagram_of(mod) == dg.diagram_of(mod, "presentation", pres)
        rep.record("route-equivalence", ok, p.elements)

        t = gen.random_poset_with_top(rng, rng.randint(1, 6))
        mod = gen.random_module(rng, t, field, kill=(t.top,))
        rep.record("rank-formula", dg.rank_diagram_direct(mod) == dg.rank_diagram_via_formula(mod))

        bases = [chain(range(rng.randint(2, 5))) for _ in range(3)]
        d1 = gen.random_diagram(rng, bases[0], rng.randint(0, 4))
        nu, d2 = gen.random_matching_from(rng, d1, bases[1])
        eta, d3 = gen.random_matching_from(rng, d2, bases[2])
        glued = mt.glue_matchings(nu, eta)
        ok = (bool(mt.validate_matching(glued, d1, d3))
              and glued.cost <= nu.cost + eta.cost)
        rep.record("gluing-cost", ok, (glued.cost, nu.cost, eta.cost))
    return rep
