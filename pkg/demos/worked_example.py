"""The three-parameter unfolding on random rational coefficients.

Prints the parametric normal form for a few tuples (a, b, c, d, e) next
to the closed forms b/a and b(da - cb)/a^3 for the two surviving
parameter-free coefficients, and the slope coefficients of the curve of
equilibria, which fix those coefficients independently.

    python demos/worked_example.py
"""
import random
from fractions import Fraction

from hznf.algebra import format_element
from hznf.verify import example_field, reproduce_paper_example, zero_curve_coefficients

rng = random.Random(5)
for _ in range(3):
    while True:
        a, b, c, d, e = (Fraction(rng.randint(1, 6) * rng.choice([-1, 1]), rng.randint(1, 3))
                         for _ in range(5))
        if a * b * (d * a - c * b) != 0 and a != b:
            break
    rep = reproduce_paper_example(a, b, c, d, e)
    sigma = zero_curve_coefficients(example_field(a, b, c, d, e).mu_free(), 1)
    print(f"(a, b, c, d, e) = ({a}, {b}, {c}, {d}, {e})")
    print("  normal form ", format_element(rep.normalized))
    print(f"  E^0_1: {rep.beta1}   b/a = {rep.expected_beta1}")
    print(f"  E^0_2: {rep.beta2}   b(da - cb)/a^3 = {rep.expected_beta2}")
    print(f"  equilibrium slope x/R = {sigma[0]} + ({sigma[1]}) R + ...")
