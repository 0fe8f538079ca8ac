"""Negative degree reverse lexicographic order and its module extension.

Keys are arranged so that ascending sort lists terms from largest to
smallest: the constant monomial comes first, x1 beats x2, and among
components e1 beats e2 (term over position).
"""

from .errors import ZeroElement

LESS, EQUAL, GREATER = -1, 0, 1


def mono_key(e):
    return (sum(e),) + tuple(reversed(e))


def term_key(comp, e):
    return mono_key(e) + (comp,)


def cmp_monomial(a, b):
    ka, kb = mono_key(a), mono_key(b)
    if ka == kb:
        return EQUAL
    return GREATER if ka < kb else LESS


def cmp_term(ca, a, cb, b):
    ka, kb = term_key(ca, a), term_key(cb, b)
    if ka == kb:
        return EQUAL
    return GREATER if ka < kb else LESS


def leading(f):
    """(component, exponents, coefficient) of the largest term of a VecPoly."""
    best = None
    for i, e, c in f.terms():
        k = term_key(i, e)
        if best is None or k < best[0]:
            best = (k, i, e, c)
    if best is None:
        raise ZeroElement("leading term of the zero element")
    return best[1], best[2], best[3]
