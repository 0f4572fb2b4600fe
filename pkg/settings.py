import os
from dataclasses import dataclass, field, replace
from functools import lru_cache
from pathlib import Path

import toml

CONFIG_PATH = Path(__file__).resolve().parent / "config.toml"
PREC_CEILING_ENV = "KH_PREC_CEILING"


@dataclass(frozen=True)
class Settings:
    default_digits: int = 30
    ceiling_digits: int = 400
    guard_digits: int = 10
    interpolation_prime: int = 2305843009213693951
    check_prime: int = 2147483647
    seed: int = 20240519
    extra_samples: int = 12
    validation_samples: int = 20
    gate_samples: int = 100
    phi_iterations: int = 10
    arch_validation_points: int = 20
    sieve_primes: tuple = (3, 5, 7, 11, 13)
    jobs: int = 1
    trial_bound: int = 100000
    factor_timeout: float = 20.0
    log_level: str = "WARNING"
    source: str = field(default="defaults", compare=False)


def _from_mapping(data, source):
    precision = data.get("precision", {})
    interp = data.get("interpolation", {})
    arch = data.get("arch", {})
    enum = data.get("enumerate", {})
    factor = data.get("factor", {})
    logs = data.get("logging", {})
    defaults = Settings()
    ceiling = int(precision.get("ceiling_digits", defaults.ceiling_digits))
    if os.environ.get(PREC_CEILING_ENV):
        ceiling = int(os.environ[PREC_CEILING_ENV])
    return Settings(
        default_digits=int(precision.get("default_digits", defaults.default_digits)),
        ceiling_digits=ceiling,
        guard_digits=int(precision.get("guard_digits", defaults.guard_digits)),
        interpolation_prime=int(interp.get("prime", defaults.interpolation_prime)),
        check_prime=int(interp.get("check_prime", defaults.check_prime)),
        seed=int(interp.get("seed", defaults.seed)),
        extra_samples=int(interp.get("extra_samples", defaults.extra_samples)),
        validation_samples=int(interp.get("validation_samples", defaults.validation_samples)),
        gate_samples=int(interp.get("gate_samples", defaults.gate_samples)),
        phi_iterations=int(arch.get("phi_iterations", defaults.phi_iterations)),
        arch_validation_points=int(arch.get("validation_points", defaults.arch_validation_points)),
        sieve_primes=tuple(int(p) for p in enum.get("sieve_primes", defaults.sieve_primes)),
        jobs=int(enum.get("jobs", defaults.jobs)),
        trial_bound=int(factor.get("trial_bound", defaults.trial_bound)),
        factor_timeout=float(factor.get("timeout_seconds", defaults.factor_timeout)),
        log_level=str(logs.get("level", defaults.log_level)).upper(),
        source=source,
    )


def load_settings(path=None):
    """Read the toml configuration; a missing file gives the built-in defaults."""
    path = Path(path) if path else CONFIG_PATH
    if not path.exists():
        return _from_mapping({}, "defaults")
    return _from_mapping(toml.load(path), str(path))


_overrides = {}


def override_settings(**values):
    """Per-run overrides from the command line; None leaves a value alone."""
    _overrides.update({k: v for k, v in values.items() if v is not None})
    get_settings.cache_clear()


@lru_cache(maxsize=1)
def get_settings():
    return replace(load_settings(), **_overrides)


def clear_overrides():
    _overrides.clear()
    get_settings.cache_clear()
