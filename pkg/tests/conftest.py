from __future__ import annotations

import json
import os

import pytest

from bimodfusion.catalog import CATALOG_NAMES, catalog

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")
GOLDENS = os.path.join(os.path.dirname(__file__), "goldens")

_cache: dict = {}


def get_catalog(name: str):
    """Session-cached catalog entries (MtcData is immutable, safe to share)."""
    if name not in _cache:
        _cache[name] = catalog(name)
    return _cache[name]


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES, name)


def load_fixture(name: str) -> dict:
    with open(fixture_path(name), "r", encoding="utf-8") as fh:
        return json.load(fh)


def load_golden(name: str) -> dict:
    with open(os.path.join(GOLDENS, name), "r", encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture(params=CATALOG_NAMES)
def catalog_entry(request):
    return get_catalog(request.param)
