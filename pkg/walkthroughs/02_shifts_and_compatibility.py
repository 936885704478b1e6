"""Parameter shifts on a generalized Meixner II system with two weights.

Each shift gives a pair of connection matrices; three shifts give commuting squares.
Run: python3 walkthroughs/02_shifts_and_compatibility.py
"""
from mops.contiguity import ShiftDescriptor, discrete_compatibility, shift_check
from mops.families import FamilySpec, family_to_weight_system

ws = family_to_weight_system(FamilySpec("gen-meixner2", 2, ("1/4",), "1/2", ("1/3", "2/5")))

for text in ("b:a=1,i=1", "c:j=1"):
    rep = shift_check(ws, ShiftDescriptor.parse(text), 5)
    print(rep.summary(), "\n")

rep = discrete_compatibility(ws, ShiftDescriptor.b(1, 1), ShiftDescriptor.b(2, 1), ShiftDescriptor.c(1), 4)
print(rep.summary())
