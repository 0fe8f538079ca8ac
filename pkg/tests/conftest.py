from kgsing.germ import ConstraintGerm
from kgsing.ring import VecPoly, parse_poly


def names(n):
    return [f"x{i + 1}" for i in range(n)]


def P(text, n=3, tol=None):
    """Polynomial in x1..xn from text."""
    return parse_poly(text, names(n), tol)


def V(texts, n=3):
    return VecPoly([P(t, n) for t in texts])


def germ(g=(), h=(), n=3):
    return ConstraintGerm(n, [P(t, n) for t in g], [P(t, n) for t in h])


# --- acceptance summary --------------------------------------------------------

ACCEPTANCE = {}


def record_acceptance(number, title, ok, detail=""):
    """Store and print the one-line result of an acceptance criterion."""
    line = f"criterion {number:>2} [{'PASS' if ok else 'FAIL'}] {title}" + (
        f" -- {detail}" if detail else "")
    ACCEPTANCE[number] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
