"""Recompute the two worked examples exactly and print each displayed quantity.

Usage: python scripts/reproduce_examples.py
"""

import warnings

from epkit import classify, douglas_constant, douglas_constant_dual, fixture, moore_penrose, poly_eval
from epkit.blockrep import orthodecompose, rep_criterion
from epkit.classes import CharacterizationSkipped
from epkit.io import matrix_to_dict
from epkit.polynomial import render


def show(label, M):
    rows = matrix_to_dict(M)["entries"]
    width = max(len(x) for row in rows for x in row)
    print(f"{label} =")
    for row in rows:
        print("  [" + "  ".join(x.rjust(width) for x in row) + "]")
    print()


def example(name, poly_name):
    T, p = fixture(name), fixture(poly_name)
    Tp = moore_penrose(T)
    print(f"== {name}, p(t) = {render(p)}")
    show("T", T)
    show("T^+", Tp)
    show("p(T)", poly_eval(p, T))
    show("T T^+ - T^+ T", T @ Tp - Tp @ T)
    show("T^+ T", Tp @ T)
    report = classify(T, p, 3)
    for cls, verdict in report.verdicts().items():
        print(f"  {cls:<12} {verdict}")
    print()
    return T, p


def main():
    warnings.simplefilter("ignore", CharacterizationSkipped)
    T, p = example("example1", "example1_poly")
    print(f"Douglas constant |p(T)* T^+|  = {douglas_constant(T, p)}")
    print(f"dual constant    |p(T)* T*|   = {douglas_constant_dual(T, p)}")
    print()
    T, p = example("example2", "example2_poly")
    rep = orthodecompose(T.to_float())
    show("T1 (float)", rep.T1)
    show("T2 (float)", rep.T2)
    rc = rep_criterion(T.to_float(), p)
    print(f"block criterion T2 q(T1) = 0: {rc.holds} (residual {rc.residual:.1e})")


if __name__ == "__main__":
    main()
