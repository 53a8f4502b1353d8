"""Relation tables for the n = 3 membership tests.

Each relation reads ``scale * NAME == rhs`` where ``NAME`` is one of the
thirteen O(3) invariants and ``rhs`` is a polynomial in the other invariants
and the q-tilde values.  The tables are plain data; :func:`evaluate` parses
each right-hand side once with :mod:`ast` and evaluates it over Fractions or
floats.

The residual reported for a relation is ``NAME - rhs / scale``, so it has
the units of the invariant itself and can be compared with a degree-based
threshold.
"""
from __future__ import annotations

import ast
import operator
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

__all__ = ["FD_RELATIONS", "PD_RELATIONS", "Relation", "evaluate", "residuals"]


@dataclass(frozen=True)
class Relation:
    name: str
    degree: int
    scale: int
    rhs: str


# Full decoupleability; q1, q2, q3 are the characteristic-polynomial
# coefficients of G*2.
FD_RELATIONS = (
    Relation("H2", 2, 1, "10*q1"),
    Relation("H4", 4, 1, "2*(22*q1**2 - 15*q2)"),
    Relation("J2", 2, 1, "q1"),
    Relation("L4", 4, 1, "2*(q1**2 - 5*q2)"),
    Relation("H6", 6, 1, "4*(16*q1**3 - 55*q1*q2 + 75*q3)"),
    Relation("H10", 10, 1, "8*(128*q1**5 - 700*q1**3*q2 + 725*q1*q2**2 + 950*q1**2*q3 - 875*q2*q3)"),
    Relation("J4", 4, 1, "2*(3*q1**2 - 5*q2)"),
    Relation("K4", 4, 1, "4*(2*q1**2 - 5*q2)"),
    Relation("J6", 6, 1, "12*q1**3 - 55*q1*q2 + 75*q3"),
    Relation("K6", 6, 1, "2*(8*q1**3 - 35*q1*q2 + 75*q3)"),
    Relation("L6", 6, 1, "6*(8*q1**3 - 25*q1*q2 + 25*q3)"),
    Relation("M6", 6, 1, "4*q1**3 - 15*q1*q2 + 75*q3"),
    Relation("H8", 8, 1, "4*(72*q1**4 - 270*q1**2*q2 + 75*q2**2 + 325*q1*q3)"),
)

# Partial (not full) decoupleability; q1 is the first partial-test quantity,
# a rational function of H2, H4, J2, L4.
PD_RELATIONS = (
    Relation("J4", 4, 18, "-H2**2 + 12*J2*H2 - 24*J2**2 + 2*H4 + 12*L4"),
    Relation("K4", 4, 9, "-2*H2**2 + 15*J2*H2 - 66*J2**2 + 4*H4 + 6*L4"),
    Relation(
        "H6", 6, 27,
        "8100*q1**3 - 8100*J2*q1**2 - (7272*J2**2 - 234*H4 + 1512*L4)*q1 - 13*H2**3 + 372*J2**3"
        " - 156*H2*J2**2 + 26*H2*H4 - 7*H2**2*J2 + 146*H4*J2 + 30*H2*L4 - 924*J2*L4",
    ),
    Relation(
        "J6", 6, 36,
        "2700*q1**3 - 2700*J2*q1**2 - (144*J2**2 - 18*H4 + 324*L4)*q1 - H2**3 - 72*J2**3"
        " + 12*H2*J2**2 + 2*H2*H4 + 6*H4*J2 + 12*H2*L4",
    ),
    Relation(
        "K6", 6, 162,
        "24300*q1**3 - 24300*J2*q1**2 - (8136*J2**2 - 342*H4 + 3456*L4)*q1 - 19*H2**3 - 744*J2**3"
        " + 96*H2*J2**2 + 38*H2*H4 + 14*H2**2*J2 + 86*H4*J2 + 48*H2*L4 - 744*J2*L4",
    ),
    Relation(
        "L6", 6, 81,
        "12150*q1**3 - 12150*J2*q1**2 - (7488*J2**2 - 261*H4 + 1998*L4)*q1 - 19*H2**3 - 204*J2**3"
        " - 174*H2*J2**2 + 38*H2*H4 + 23*H2**2*J2 + 149*H4*J2 + 48*H2*L4 - 852*J2*L4",
    ),
    Relation(
        "M6", 6, 324,
        "24300*q1**3 - 24300*J2*q1**2 + (5544*J2**2 - 18*H4 - 2376*L4)*q1 + H2**3 - 552*J2**3"
        " + 120*H2*J2**2 - 2*H2*H4 - 14*H2**2*J2 + 22*H4*J2 + 6*H2*L4 + 420*J2*L4",
    ),
    Relation(
        "H8", 8, 1458,
        "1895400*J2*q1**3 - (356400*J2**2 + 40500*H4 - 121500*L4)*q1**2"
        " + (158832*J2**3 + 5796*H4*J2 - 206928*L4*J2)*q1 + 70*H2**4 + 30792*J2**4"
        " - 8868*H2*J2**3 + 442*H4**2 + 830*H2**2*J2**2 - 7216*H4*J2**2 - 11088*L4**2"
        " - 361*H2**2*H4 + 149*H2**3*J2 + 674*H2*H4*J2 + 30*H2**2*L4 - 3624*J2**2*L4"
        " + 3828*H4*L4 + 408*H2*J2*L4",
    ),
    Relation(
        "H10", 10, 2187,
        "(510300*H4 - 5832000*J2**2)*q1**3 - (4017600*J2**3 + 251100*H4*J2 + 777600*L4*J2)*q1**2"
        " - (9237600*J2**4 + 95256*H4*J2**2 + 505440*L4*J2**2 - 10782*H4**2 + 35640*L4**2"
        " + 71496*H4*L4)*q1 + 70*H2**5 - 1226976*J2**5 + 607632*H2*J2**4 - 159160*H2**2*J2**3"
        " + 230888*H4*J2**3 + 1478*H2*H4**2 + 110*H2**3*J2**2 + 12212*H2*H4*J2**2"
        " + 2448*H2*L4**2 - 35928*J2*L4**2 - 879*H2**3*H4 - 1161*H2**4*J2 + 2506*H4**2*J2"
        " - 630*H2**3*L4 + 2866*H2**2*H4*J2 - 423096*J2**3*L4 - 125412*H2*J2**2*L4"
        " + 2040*H2*H4*L4 + 204*H2**2*J2*L4 - 26160*H4*J2*L4",
    ),
)

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Pow: operator.pow}
_UNOPS = {ast.USub: operator.neg, ast.UAdd: operator.pos}


@lru_cache(maxsize=None)
def _parse(expr):
    return ast.parse(expr, mode="eval").body


def _eval(node, env):
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        if isinstance(node.op, ast.Pow):
            if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                raise ValueError("only integer powers are allowed")
            return _eval(node.left, env) ** node.right.value
        return _BINOPS[type(node.op)](_eval(node.left, env), _eval(node.right, env))
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
        return _UNOPS[type(node.op)](_eval(node.operand, env))
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return node.value
    if isinstance(node, ast.Name):
        return env[node.id]
    raise ValueError(f"unsupported syntax: {ast.dump(node)}")


def evaluate(expr, env):
    """Evaluate a polynomial expression string over the values in ``env``."""
    return _eval(_parse(expr), env)


def residuals(table, env, exact):
    """``{name: invariant - rhs/scale}`` for every relation in ``table``."""
    out = {}
    for rel in table:
        rhs = evaluate(rel.rhs, env)
        scale = Fraction(rel.scale) if exact else float(rel.scale)
        out[rel.name] = env[rel.name] - rhs / scale
    return out
