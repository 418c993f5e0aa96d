from functools import lru_cache

from hypothesis import HealthCheck, settings

from artifact.lie import CurrentAlgebra, build_chevalley
from artifact.rootdata import build_folding, build_root_system

settings.register_profile("artifact", derandomize=True, deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("artifact")


@lru_cache(maxsize=None)
def algebra(kind: str, rank: int):
    return build_chevalley(build_root_system(kind, rank))


@lru_cache(maxsize=None)
def current(kind: str, rank: int, twisted: bool = False, eps_sign: int = 1) -> CurrentAlgebra:
    alg = algebra(kind, rank)
    fd = build_folding(alg.rs) if twisted else None
    return CurrentAlgebra(alg, fd, eps_sign) if twisted else CurrentAlgebra(alg)
