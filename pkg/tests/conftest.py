import numpy as np
import pytest

# independent gate definitions, built from scratch rather than imported
_R2 = np.sqrt(0.5)
ORACLE_GATES = {
    "H": np.array([[_R2, _R2], [_R2, -_R2]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "T": np.array([[1, 0], [0, np.exp(1j * np.pi / 4)]], dtype=complex),
}


def naive_matrix(word):
    m = np.eye(2, dtype=complex)
    for g in word:
        m = m @ ORACLE_GATES[g]
    return m


def phase_distance(u, v):
    """sqrt(1 - |tr(U^dag V)|/2) evaluated directly."""
    return float(np.sqrt(max(0.0, 1.0 - abs(np.trace(u.conj().T @ v)) / 2.0)))


def random_word(rng, max_len):
    n = int(rng.integers(0, max_len + 1))
    return "".join(rng.choice(list("HST"), size=n))


def random_su2(rng):
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    w, x, y, z = q
    return np.array([[w - 1j * z, -y - 1j * x], [y - 1j * x, w + 1j * z]])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion."""
    def record(name, ok, detail):
        line = f"{name} {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE):
            terminalreporter.write_line(line)
