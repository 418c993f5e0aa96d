"""Command-line front end: characters, fibers, tables and verification suites.

Every run resolves a JobConfig from defaults, an optional flat ``key = value``
file and command-line flags (flags win), embeds the resolved config in its
report and prints the report as json, csv or text.  Exit codes: 0 pass,
1 failed check, 2 configuration error, 3 cutoff did not stabilize.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import random
import sys
import tempfile
from collections import Counter
from dataclasses import asdict, dataclass, replace
from fractions import Fraction
from itertools import combinations
from pathlib import Path

from . import __version__
from .demazure import (RelationFailure, RouteDisagreement, demazure_twisted, demazure_untwisted,
                       fusion_module, twisted_relation_failures, twisted_weyl, weyl_relation_failures)
from .globalmod import (CutoffError, build_global, character_product, factorization_check, fiber,
                        fiber_zero, freeness_check, polynomial_hilbert)
from .lie import CurrentAlgebra, Hyperspecial, build_chevalley
from .modcore import FORMAT_VERSION, GradedModule, character, dump_module, load_module
from .rootdata import build_folding, build_root_system

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_CUTOFF = 0, 1, 2, 3
COMMANDS = ("eta-check", "char", "verify", "fiber", "table")
SUITES = ("fusion", "fiber", "freeness", "factorization", "relations")
FORMATS = ("json", "csv", "text")
# fiber: None lets the Nakayama bound default to m times the ambient dimension
DEFAULT_CUTOFF = {"eta-check": 6, "char": 8, "verify": 8, "fiber": None, "table": 8}
ETA_PAIRS = 200


class ConfigError(ValueError):
    """Invalid job configuration."""


# ------------------------------------------------------------ configuration

@dataclass(frozen=True)
class JobConfig:
    command: str
    type: str = "A"
    rank: int = 2
    fold: bool = True
    level: int = 1
    coweights: tuple = ()
    points: tuple = ()
    cutoff: int | None = None
    format: str = "text"
    seed: int = 0
    cache_dir: str | None = None
    suite: str = "all"

    def resolved(self) -> dict:
        """The config as embedded in reports; the cache location does not change results."""
        d = asdict(self)
        d.pop("cache_dir")
        d["coweights"] = [list(lam) for lam in self.coweights]
        d["points"] = [str(p) for p in self.points]
        return d


def parse_bool(text: str) -> bool:
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def parse_int(text, name: str) -> int:
    try:
        return int(str(text).strip())
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {text!r}") from None


def parse_coweights(text: str) -> tuple:
    """'1,0;0,1' -> ((1, 0), (0, 1))."""
    text = str(text).strip()
    if not text:
        return ()
    out = []
    for part in text.split(";"):
        try:
            out.append(tuple(int(x) for x in part.split(",")))
        except ValueError:
            raise ConfigError(f"bad coweight {part!r}") from None
    return tuple(out)


def parse_points(text: str) -> tuple:
    """'1,-1,1/2' -> rationals."""
    text = str(text).strip()
    if not text:
        return ()
    try:
        return tuple(Fraction(x.strip()) for x in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"bad point list {text!r}") from None


_FIELDS = {
    "type": lambda v: str(v).strip().upper(),
    "rank": lambda v: parse_int(v, "rank"),
    "fold": parse_bool,
    "level": lambda v: parse_int(v, "level"),
    "coweights": parse_coweights,
    "points": parse_points,
    "cutoff": lambda v: parse_int(v, "cutoff"),
    "format": lambda v: str(v).strip().lower(),
    "seed": lambda v: parse_int(v, "seed"),
    "cache_dir": lambda v: str(v).strip() or None,
    "suite": lambda v: str(v).strip().lower(),
}


def read_config_file(path: str) -> dict:
    """Flat 'key = value' lines; '#' starts a comment."""
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config file: {e}") from None
    out = {}
    for n, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in _FIELDS:
            raise ConfigError(f"{path}:{n}: unknown or malformed entry {line!r}")
        out[key] = value.strip()
    return out


def validate(cfg: JobConfig) -> JobConfig:
    if cfg.command not in COMMANDS:
        raise ConfigError(f"unknown command {cfg.command!r}")
    if cfg.format not in FORMATS:
        raise ConfigError(f"format must be one of {', '.join(FORMATS)}")
    if cfg.suite != "all" and cfg.suite not in SUITES:
        raise ConfigError(f"suite must be one of all, {', '.join(SUITES)}")
    if cfg.rank < 1:
        raise ConfigError("rank must be positive")
    if cfg.level < 1:
        raise ConfigError("level must be at least 1")
    if cfg.cutoff is None:
        cfg = replace(cfg, cutoff=DEFAULT_CUTOFF[cfg.command])
    if cfg.cutoff is not None and cfg.cutoff < 0:
        raise ConfigError("cutoff must be nonnegative")
    try:
        rs = build_root_system(cfg.type, cfg.rank)
    except (ValueError, KeyError) as e:
        raise ConfigError(f"bad root system: {e}") from None
    if cfg.command == "eta-check":
        if cfg.type != "A" or cfg.rank % 2 or cfg.rank > 4:
            raise ConfigError("eta-check needs A_2 or A_4 (a folding of type A_{2l} with l <= 2)")
        return replace(cfg, fold=True, coweights=(), points=())
    if cfg.type != "A":
        raise ConfigError("module constructions are implemented for type A")
    if cfg.fold:
        try:
            build_folding(rs)
        except (ValueError, KeyError) as e:
            raise ConfigError(f"no folding for {rs.name}: {e}") from None
    for lam in cfg.coweights:
        if len(lam) != cfg.rank or any(x < 0 for x in lam):
            raise ConfigError(f"coweight {lam} is not a dominant coweight of rank {cfg.rank}")
    if not cfg.coweights and cfg.command != "table":
        cfg = replace(cfg, coweights=(tuple(1 if k == 0 else 0 for k in range(cfg.rank)),))
    if cfg.points and len(cfg.points) != len(cfg.coweights):
        raise ConfigError("one point per coweight is needed")
    if cfg.command in ("verify", "fiber") and not cfg.fold:
        raise ConfigError(f"{cfg.command} works with the twisted algebra; set fold")
    if cfg.command == "fiber" and not cfg.points:
        raise ConfigError("fiber needs points")
    return cfg


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value file; flags override it")
    common.add_argument("--type")
    common.add_argument("--rank")
    common.add_argument("--fold", nargs="?", const="true", help="use the twisted algebra (default on)")
    common.add_argument("--no-fold", dest="fold", action="store_const", const="false")
    common.add_argument("--level")
    common.add_argument("--coweights", help="';'-separated coweights, e.g. '1,0;0,1'")
    common.add_argument("--points", help="','-separated rationals, one per coweight")
    common.add_argument("--cutoff")
    common.add_argument("--format", choices=FORMATS)
    common.add_argument("--seed")
    common.add_argument("--cache-dir")
    parser = argparse.ArgumentParser(prog="artifact", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"artifact {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("eta-check", parents=[common], help="check the eta identities and brackets")
    sub.add_parser("char", parents=[common], help="graded characters of the Demazure and global modules")
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", nargs="?", choices=("all",) + SUITES)
    sub.add_parser("fiber", parents=[common], help="fiber of the global Demazure module at a point")
    sub.add_parser("table", parents=[common], help="golden table of Demazure characters for c <= level")
    return parser


def resolve(argv: list | None = None) -> JobConfig:
    args = build_parser().parse_args(argv)
    raw = read_config_file(args.config) if args.config else {}
    for key in _FIELDS:
        value = getattr(args, key, None)
        if value is not None:
            raw[key] = value
    values = {key: _FIELDS[key](value) for key, value in raw.items()}
    return validate(JobConfig(command=args.command, **values))


# ------------------------------------------------------------ cache

class Cache:
    """Serialized modules keyed by a content hash of what determines them.

    Entries whose recorded key does not match are ignored, never removed.
    """

    def __init__(self, root: str | None):
        self.root = Path(root) if root else None

    @staticmethod
    def _key(payload: dict) -> str:
        return json.dumps({**payload, "version": __version__, "format": FORMAT_VERSION}, sort_keys=True)

    def _path(self, key: str) -> Path:
        return self.root / (hashlib.sha256(key.encode()).hexdigest() + ".mod")

    def get(self, payload: dict, ca: CurrentAlgebra) -> GradedModule | None:
        if self.root is None:
            return None
        key = self._key(payload)
        path = self._path(key)
        try:
            head, _, body = path.read_text().partition("\n")
        except OSError:
            return None
        if head != "key " + key:
            return None
        try:
            return load_module(body, ca)
        except (ValueError, KeyError, IndexError):
            return None

    def put(self, payload: dict, M: GradedModule) -> None:
        if self.root is None:
            return
        self.root.mkdir(parents=True, exist_ok=True)
        key = self._key(payload)
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            fh.write("key " + key + "\n" + dump_module(M))
        os.replace(tmp, self._path(key))


# ------------------------------------------------------------ objects

class Context:
    def __init__(self, cfg: JobConfig):
        self.cfg = cfg
        self.rs = build_root_system(cfg.type, cfg.rank)
        self.alg = build_chevalley(self.rs)
        self.fd = build_folding(self.rs) if cfg.fold else None
        self.ca = CurrentAlgebra(self.alg, self.fd)
        self.untw = CurrentAlgebra(self.alg) if cfg.fold else self.ca
        self.cache = Cache(cfg.cache_dir)
        self.rng = random.Random(cfg.seed)
        self.c = cfg.level
        self._memo: dict = {}

    @property
    def m(self) -> int:
        return self.ca.m

    def _cached(self, payload: dict, ca: CurrentAlgebra, build):
        payload = {"type": self.rs.name, **payload}
        mkey = json.dumps(payload, sort_keys=True)
        M = self._memo.get(mkey)
        if M is None:
            M = self.cache.get(payload, ca)
            if M is None:
                M = build()
                self.cache.put(payload, M)
            self._memo[mkey] = M
        return M

    def weyl(self, mu_bar) -> GradedModule:
        mu_bar = tuple(mu_bar)
        return self._cached({"object": "Wsigma", "mu": list(mu_bar)}, self.ca,
                            lambda: twisted_weyl(self.ca, mu_bar, check=False))

    def untwisted(self, c: int, lam) -> GradedModule:
        lam = tuple(lam)
        return self._cached({"object": "D", "c": c, "lam": list(lam)}, self.untw,
                            lambda: demazure_untwisted(self.untw, c, lam))

    def twisted(self, c: int, lam, route: str = "presentation") -> GradedModule:
        lam = tuple(lam)
        return self._cached({"object": "Dsigma", "c": c, "lam": list(lam), "route": route}, self.ca,
                            lambda: self._twisted(c, lam, route))

    def _twisted(self, c: int, lam: tuple, route: str) -> GradedModule:
        if route == "presentation" and any(lam):
            W = self.weyl(tuple(c * x for x in self.fd.restrict(lam)))
            return demazure_twisted(self.ca, c, lam, route=route, weyl=W)
        return demazure_twisted(self.ca, c, lam, route=route)

    def global_module(self, c: int, lams):
        return build_global(self.ca, [self.untwisted(c, lam) for lam in lams], 0)

    def total(self, lams) -> tuple:
        return tuple(sum(col) for col in zip(*lams)) if lams else (0,) * self.rs.rank

    def restricted(self, ch: Counter) -> Counter:
        """Ungraded h^sigma-character of an h-character with grades."""
        out = Counter()
        for (w, _), k in ch.items():
            out[self.fd.restrict(w)] += k
        return out

    def generic_points(self, n: int) -> tuple:
        """Seeded rationals with distinct nonzero m-th powers."""
        values = self.rng.sample(range(1, 40), n)
        return tuple(Fraction(v * self.rng.choice((1, -1))) for v in values)

    def collided_coweight(self, lam1, lam2) -> tuple:
        """lambda_1 + gamma^-1(lambda_2) for gamma = -1; -1 acts on coweights through tau when m = 2."""
        if self.m == 2:
            lam2 = self.fd.tau_weight(tuple(lam2))
        return tuple(a + b for a, b in zip(lam1, lam2))


# ------------------------------------------------------------ records

def char_record(ch: Counter) -> dict:
    """{weights, grades, mult} with entries sorted; grades are 0 for ungraded characters."""
    items = []
    for key, k in ch.items():
        w, g = key if isinstance(key[0], tuple) else (key, 0)
        items.append((tuple(w), g, k))
    items.sort(key=lambda it: (it[1], it[0]))
    return {"weights": [list(w) for w, _, _ in items], "grades": [g for _, g, _ in items],
            "mult": [k for _, _, k in items]}


def q_dims_of(ch: Counter) -> list:
    top = max((g for (_, g) in ch), default=-1)
    out = [0] * (top + 1)
    for (_, g), k in ch.items():
        out[g] += k
    return out


def golden(dims: list) -> str:
    return " ".join(f"{d}@{g}" for g, d in enumerate(dims) if d)


def record(key: str, obj: str, params: dict, verdict: str, *, ch: Counter | None = None,
           dims: list | None = None, cutoff: int | None = None, details: dict | None = None) -> dict:
    rec = {"key": key, "object": obj, "parameters": params, "verdict": verdict, "cutoff": cutoff,
           "dims": dims if dims is not None else (q_dims_of(ch) if ch is not None and _graded(ch) else None),
           "character": char_record(ch) if ch is not None else None, "details": details or {}}
    return rec


def _graded(ch: Counter) -> bool:
    return all(isinstance(k, tuple) and len(k) == 2 and isinstance(k[0], tuple) for k in ch)


def _lam(lam) -> str:
    return ",".join(map(str, lam))


def _chdiff(a: Counter, b: Counter) -> dict:
    keys = sorted(set(a) | set(b), key=str)
    return {str(k): [a.get(k, 0), b.get(k, 0)] for k in keys if a.get(k, 0) != b.get(k, 0)}


# ------------------------------------------------------------ commands

def cmd_eta_check(ctx: Context) -> list:
    cfg = ctx.cfg
    hs = Hyperspecial(ctx.alg, ctx.fd)
    bound = cfg.cutoff
    fails = hs.identity_failures(bound)
    checked = sum(1 for k in range(bound + 1) for fam, *_ in hs.basis(k) if hs.image_degree(fam, k) <= bound)
    recs = [record("eta/identities", "eta identities", {"bound": bound}, "fail" if fails else "pass",
                   details={"checked": checked, "first_failure": [str(x) for x in fails[0]] if fails else None,
                            "failures": len(fails)})]
    pool = [x for k in range(max(bound // 2, 1) + 1) for *_, x in hs.basis(k)]
    pairs = [(ctx.rng.choice(pool), ctx.rng.choice(pool)) for _ in range(ETA_PAIRS)]
    bad = hs.bracket_failures(pairs)
    recs.append(record("eta/brackets", "eta bracket preservation", {"pairs": ETA_PAIRS, "seed": cfg.seed},
                       "fail" if bad else "pass", details={"failures": [list(b) for b in bad[:5]]}))
    return recs


def _trivial(cfg: JobConfig) -> bool:
    return not any(any(lam) for lam in cfg.coweights)


def cmd_char(ctx: Context) -> list:
    cfg, c = ctx.cfg, ctx.c
    if _trivial(cfg):
        return [record("trivial", "trivial module", {"c": c}, "info", ch=Counter({((0,) * ctx.ca.weight_rank, 0): 1}))]
    recs = []
    for lam in sorted(set(cfg.coweights)):
        D = ctx.untwisted(c, lam)
        recs.append(record(f"D/{_lam(lam)}", f"D(c={c}; {_lam(lam)})", {"c": c, "lam": list(lam)}, "info",
                           ch=character(D)))
    if not cfg.fold:
        return recs
    lam = ctx.total(cfg.coweights)
    recs.append(record(f"Dsigma/{_lam(lam)}", f"Dsigma(c={c}; {_lam(lam)})", {"c": c, "lam": list(lam)}, "info",
                       ch=character(ctx.twisted(c, lam))))
    G = ctx.global_module(c, cfg.coweights)
    N = cfg.cutoff
    ch = Counter()
    for d in range(N + 1):
        for w, k in G.character(d).items():
            ch[(w, d)] += k
    recs.append(record("global", "global Demazure module", {"c": c, "lams": [list(x) for x in cfg.coweights]},
                       "info", ch=ch, cutoff=N, dims=G.dims(N)))
    if cfg.points:
        recs.append(_fiber_record(ctx, G, cfg.points))
    return recs


def _fiber_record(ctx: Context, G, points, max_degree: int | None = None) -> dict:
    fb = fiber(G, points, max_degree=max_degree)
    ch = fb.character if fb.kind == "zero" else Counter(fb.character)
    return record("fiber/" + ",".join(map(str, points)), "fiber", {"points": [str(p) for p in points]}, "info",
                  ch=ch, details={"kind": fb.kind, "cutoffs": list(fb.cutoffs), "dims": list(fb.dims)})


def cmd_fiber(ctx: Context) -> list:
    G = ctx.global_module(ctx.c, ctx.cfg.coweights)
    return [_fiber_record(ctx, G, ctx.cfg.points, ctx.cfg.cutoff)]


def cmd_table(ctx: Context) -> list:
    cfg = ctx.cfg
    lams = cfg.coweights or tuple(tuple(1 if k == j else 0 for k in range(cfg.rank)) for j in range(cfg.rank))
    recs = []
    for c in range(1, cfg.level + 1):
        for lam in lams:
            M = ctx.twisted(c, lam) if cfg.fold else ctx.untwisted(c, lam)
            dims = q_dims_of(character(M))
            line = f"{ctx.rs.name} {'fold' if cfg.fold else 'plain'} c={c} lam={_lam(lam)} : {golden(dims)}"
            recs.append(record(f"table/{c}/{_lam(lam)}", "Dsigma" if cfg.fold else "D", {"c": c, "lam": list(lam)},
                               "info", ch=character(M), details={"golden": line}))
    return recs


# ------------------------------------------------------------ suites

def suite_fusion(ctx: Context) -> list:
    cfg, c = ctx.cfg, ctx.c
    lams = list(cfg.coweights)
    lam = ctx.total(lams)
    n = len(lams)
    sets = []
    for pts in ([cfg.points] if cfg.points else []) + [tuple(Fraction(k) for k in range(1, n + 1))]:
        if pts not in sets:
            sets.append(pts)
    while len(sets) < 3:
        pts = ctx.generic_points(n)
        if pts not in sets:
            sets.append(pts)
    pres = ctx.twisted(c, lam, "presentation")
    fib = ctx.twisted(c, lam, "fiber")
    want = character(pres)
    recs = [record("fusion/routes", "Dsigma routes", {"c": c, "lam": list(lam)},
                   "pass" if character(fib) == want else "fail", ch=want,
                   details={"difference": _chdiff(character(fib), want)})]
    for pts in sets:
        F = fusion_module(ctx.ca, c, lams, pts)
        got = character(F)
        recs.append(record("fusion/" + ",".join(map(str, pts)), "fusion product", {"points": [str(p) for p in pts]},
                           "pass" if got == want else "fail", ch=got,
                           details={"difference": _chdiff(got, want)}))
    return recs


def suite_fiber(ctx: Context) -> list:
    cfg, c = ctx.cfg, ctx.c
    lams = list(cfg.coweights)
    n = len(lams)
    G = ctx.global_module(c, lams)
    lam = ctx.total(lams)
    f0 = fiber_zero(G)
    want0 = character(ctx.twisted(c, lam))
    recs = [record("fiber/zero", "fiber at 0", {"lam": list(lam)}, "pass" if f0.character == want0 else "fail",
                   ch=f0.character, details={"difference": _chdiff(f0.character, want0)})]
    pts = cfg.points if cfg.points and all(p != 0 for p in cfg.points) else tuple(Fraction(k) for k in range(1, n + 1))
    want = Counter({(0,) * ctx.ca.weight_rank: 1})
    for x in lams:
        want = character_product(want, ctx.restricted(character(ctx.untwisted(c, x))))
    fb = fiber(G, pts)
    recs.append(record("fiber/generic", f"fiber at {fb.kind} point", {"points": [str(p) for p in pts]},
                       "pass" if +Counter(fb.character) == +want else "fail", ch=Counter(fb.character),
                       details={"dim": fb.dim, "expected_dim": sum(want.values()),
                                "difference": _chdiff(Counter(fb.character), want)}))
    if n == 2:
        lam_p = ctx.collided_coweight(lams[0], lams[1])
        want_c = ctx.restricted(character(ctx.untwisted(c, lam_p)))
        fc = fiber(G, (Fraction(1), Fraction(-1)))
        recs.append(record("fiber/collided", "fiber at (1,-1)", {"lam_p": list(lam_p)},
                           "pass" if +Counter(fc.character) == +want_c else "fail", ch=Counter(fc.character),
                           details={"dim": fc.dim, "expected_dim": sum(want_c.values()),
                                    "difference": _chdiff(Counter(fc.character), want_c)}))
    return recs


def suite_freeness(ctx: Context) -> list:
    cfg, c, N = ctx.cfg, ctx.c, ctx.cfg.cutoff
    lams = list(cfg.coweights)
    n = len(lams)
    G = ctx.global_module(c, lams)
    samples = [tuple(Fraction(k) for k in range(1, n + 1)), ctx.generic_points(n)]
    if n == 2:
        samples.append((Fraction(1), Fraction(-1)))
    rep = freeness_check(G, N, points=samples)
    recs = [record("freeness", "freeness identity", {"lams": [list(x) for x in lams]},
                   "pass" if rep.passed else "fail", cutoff=N, dims=rep.details["global_dims"],
                   details={k: v for k, v in rep.details.items() if k != "global_dims"})]
    if n == 1 and sum(lams[0]) == 1:
        j = lams[0].index(1) + 1
        mj = next(ctx.fd.m_i[i] for i, fib in enumerate(ctx.fd.fibers) if j in fib)
        want = polynomial_hilbert([mj], N)
        recs.append(record("freeness/hilbert", "weight algebra Hilbert series", {"m_j": mj},
                           "pass" if rep.details["hilbert"] == want else "fail", cutoff=N,
                           details={"hilbert": rep.details["hilbert"], "expected": want}))
    return recs


def _sample_partition_points(ctx: Context, blocks: list, n: int) -> tuple:
    """Distinct absolute values across blocks; inside a block the second point may be the negative of the first."""
    values = ctx.rng.sample(range(1, 40), n)
    pts = [Fraction(0)] * n
    it = iter(values)
    for blk in blocks:
        first = Fraction(next(it))
        pts[blk[0]] = first
        for i in blk[1:]:
            v = next(it)
            pts[i] = -first if i == blk[1] and ctx.rng.random() < 0.5 else Fraction(v)
    return tuple(pts)


def suite_factorization(ctx: Context) -> list:
    cfg, c = ctx.cfg, ctx.c
    lams = list(cfg.coweights)
    n = len(lams)
    if n < 2:
        return [record("factorization", "factorization", {"n": n}, "pass", details={"note": "no 2-block partition"})]
    G = ctx.global_module(c, lams)
    recs = []
    for size in range(1, n // 2 + 1):
        for first in combinations(range(n), size):
            if size * 2 == n and 0 not in first:
                continue
            blocks = [list(first), [i for i in range(n) if i not in first]]
            for _ in range(2):
                pts = _sample_partition_points(ctx, blocks, n)
                rep = factorization_check(G, blocks, pts)
                recs.append(record(f"factorization/{blocks}/{','.join(map(str, pts))}", "factorization",
                                   {"blocks": blocks, "points": [str(p) for p in pts]},
                                   "pass" if rep.passed else "fail", details=rep.details))
    return recs


def suite_relations(ctx: Context) -> list:
    cfg, c = ctx.cfg, ctx.c
    lam = ctx.total(cfg.coweights)
    recs = []
    for x in sorted(set(cfg.coweights)):
        mu = tuple(c * a for a in x)
        bad = weyl_relation_failures(ctx.untwisted(c, x), mu)
        recs.append(record(f"relations/D/{_lam(x)}", "Weyl relations on D", {"c": c, "lam": list(x)},
                           "fail" if bad else "pass", details={"failures": [str(b) for b in bad]}))
    mu_bar = tuple(c * a for a in ctx.fd.restrict(lam))
    W = ctx.weyl(mu_bar)
    bad = weyl_relation_failures(W, mu_bar)
    recs.append(record("relations/Wsigma", "twisted Weyl relations", {"mu_bar": list(mu_bar)},
                       "fail" if bad else "pass", ch=character(W), details={"failures": [str(b) for b in bad]}))
    D = ctx.twisted(c, lam, "fiber")
    bad = twisted_relation_failures(D, c, lam)
    recs.append(record("relations/Dsigma", "listed Demazure relations on the fiber at 0", {"c": c, "lam": list(lam)},
                       "fail" if bad else "pass", details={"failures": [str(b) for b in bad]}))
    return recs


SUITE_FUNCS = {"fusion": suite_fusion, "fiber": suite_fiber, "freeness": suite_freeness,
               "factorization": suite_factorization, "relations": suite_relations}


def cmd_verify(ctx: Context) -> list:
    cfg = ctx.cfg
    names = SUITES if cfg.suite == "all" else (cfg.suite,)
    if _trivial(cfg):
        return [record(f"{name}/trivial", name, {}, "pass", details={"note": "all coweights are zero"})
                for name in names]
    recs = []
    for name in names:
        try:
            recs += SUITE_FUNCS[name](ctx)
        except CutoffError as e:
            recs.append(record(f"{name}/cutoff", name, {}, "cutoff", details={"error": str(e)}))
        except (RelationFailure, RouteDisagreement) as e:
            recs.append(record(f"{name}/error", name, {}, "fail", details={"error": str(e)}))
    return recs


COMMAND_FUNCS = {"eta-check": cmd_eta_check, "char": cmd_char, "verify": cmd_verify,
                 "fiber": cmd_fiber, "table": cmd_table}


# ------------------------------------------------------------ reports

def overall(recs: list) -> str:
    verdicts = {r["verdict"] for r in recs}
    if "fail" in verdicts:
        return "fail"
    if "cutoff" in verdicts:
        return "cutoff"
    return "pass"


def run(cfg: JobConfig) -> dict:
    ctx = Context(cfg)
    try:
        recs = COMMAND_FUNCS[cfg.command](ctx)
    except CutoffError as e:
        recs = [record(f"{cfg.command}/cutoff", cfg.command, {}, "cutoff", details={"error": str(e)})]
    recs.sort(key=lambda r: r["key"])
    return {"tool": "artifact", "version": __version__, "command": cfg.command, "config": cfg.resolved(),
            "records": recs, "verdict": overall(recs)}


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "object", "parameters", "verdict", "cutoff", "dims", "character"])
        w.writerow(["_config", report["command"], json.dumps(report["config"], sort_keys=True), report["verdict"],
                    "", "", ""])
        for r in report["records"]:
            w.writerow([r["key"], r["object"], json.dumps(r["parameters"], sort_keys=True), r["verdict"],
                        "" if r["cutoff"] is None else r["cutoff"],
                        "" if r["dims"] is None else " ".join(map(str, r["dims"])),
                        json.dumps(r["character"], sort_keys=True) if r["character"] else ""])
        return buf.getvalue()
    cfg = report["config"]
    lines = [f"# artifact {report['version']} {report['command']} "
             + " ".join(f"{k}={json.dumps(v, separators=(',', ':'))}" for k, v in sorted(cfg.items()))]
    for r in report["records"]:
        if "golden" in r["details"]:
            lines.append(r["details"]["golden"])
            continue
        parts = [f"{r['verdict']:6} {r['key']}: {r['object']}"]
        if r["dims"] is not None:
            parts.append("dims=" + golden(r["dims"]))
        elif r["character"] is not None:
            parts.append(f"dim={sum(r['character']['mult'])}")
        if r["cutoff"] is not None:
            parts.append(f"N={r['cutoff']}")
        if r["verdict"] in ("fail", "cutoff"):
            parts.append(json.dumps(r["details"], sort_keys=True))
        lines.append(" ".join(parts))
    lines.append(f"verdict: {report['verdict']}")
    return "\n".join(lines) + "\n"


EXIT_FOR = {"pass": EXIT_PASS, "fail": EXIT_FAIL, "cutoff": EXIT_CUTOFF}


def main(argv: list | None = None) -> int:
    try:
        cfg = resolve(argv)
    except ConfigError as e:
        print(f"artifact: configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        report = run(cfg)
    except ValueError as e:
        print(f"artifact: configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    sys.stdout.write(render(report, cfg.format))
    return EXIT_FOR[report["verdict"]]


if __name__ == "__main__":
    sys.exit(main())
