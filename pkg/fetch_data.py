import json
import logging
from functools import lru_cache
from pathlib import Path

from codec import (decode_curve, decode_hints, decode_kummer, decode_mu_hints, decode_point, decode_points,
                   decode_rationality)
from errors import InputError

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).resolve().parent / "data"

# Fetch data


def resolve(path):
    """A path as given, or the name of a bundled file under data/."""
    path = Path(path)
    if path.exists():
        return path
    bundled = DATA_DIR / path.name
    if bundled.exists():
        return bundled
    raise InputError(f"no such file: {path}")


@lru_cache(maxsize=32)
def fetch_json(path):
    path = resolve(path)
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    logger.debug("loaded %s", path)
    return data


@lru_cache(maxsize=32)
def fetch_curve(path):
    """(model, reduction hints, rationality, mu hints) from a curve file."""
    data = fetch_json(path)
    return decode_curve(data), decode_hints(data), decode_rationality(data), decode_mu_hints(data)


def fetch_point(path, model):
    data = fetch_json(path)
    if isinstance(data, dict) and "kummer" in data:
        return decode_kummer(data, model)
    return decode_point(data, model)


def fetch_points(path, model):
    return decode_points(fetch_json(path), model)
