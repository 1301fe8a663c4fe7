"""Shared between test_acceptance and conftest's terminal summary."""

RESULTS = []


def record(name, ok, detail):
    RESULTS.append((name, bool(ok), detail))
    return ok
