"""Normalize one field three ways and print what survives.

    python demos/orbital_tour.py
"""
from fractions import Fraction

from hznf import THETA, E, normalize_orbital, normalize_state
from hznf.algebra import format_element
from hznf.verify import cone_invariance_check, first_integral_obstruction

v = (THETA() + E(1, 1, 2) + E(0, 1, 1) + E(2, 2, Fraction(1, 3)) + E(1, 2, -1)
     + E(0, 2, 3) + E(3, 3, 5) + E(0, 3, Fraction(-7, 2)) + E(1, 3, 4))

print("input      ", format_element(v))
print("first integrals up to degree 8:", first_integral_obstruction(v.without_rotation(), 8))

state = normalize_state(v, 12)
print("state      ", format_element(state.normalized))
print("  case", state.case_tag, "r =", state.r, "steps", len(state.log))

orb = normalize_orbital(v, 12)
print("orbital    ", format_element(orb.normalized))
print("  r =", orb.r)

for name, w in [("input", v), ("state", state.normalized), ("orbital", orb.normalized)]:
    print(f"cones invariant for {name}:", cone_invariance_check(w))

# the recorded transformations take the input to the output
print("log replays to the state output:", state.log.replay(v) == state.normalized)
