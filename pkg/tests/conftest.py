import pytest

from blackbox_algebra.explicit import encrypt, parse_structure


@pytest.fixture
def encrypted():
    """Factory: descriptor or structure -> (structure, box, oracle)."""

    def make(structure, seed=0):
        A = parse_structure(structure) if isinstance(structure, str) else structure
        X, oracle = encrypt(A, seed)
        return A, X, oracle

    return make


class CountingBox:
    """Wraps a box and counts oracle calls independently of its own counters."""

    def __init__(self, box):
        self.box = box
        self.calls = {"sample": 0, "apply": 0, "equal": 0}

    def __getattr__(self, name):
        return getattr(self.box, name)

    def sample(self):
        self.calls["sample"] += 1
        return self.box.sample()

    def apply(self, op, *args):
        self.calls["apply"] += 1
        return self.box.apply(op, *args)

    def equal(self, x, y):
        self.calls["equal"] += 1
        return self.box.equal(x, y)

    def mul(self, x, y):
        return self.apply("product" if self.box.signature.kind == "group" else "mul", x, y)

    def inv(self, x):
        return self.apply("inverse" if self.box.signature.kind == "group" else "inv", x)

    def constant(self, name):
        return self.apply(name)

    def identity(self):
        return self.constant("identity" if self.box.signature.kind == "group" else "one")


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        ok, title, detail = results[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d} {title}: {detail}")
