"""
The command line front end
==========================

``simpcert eval`` prints one report per theorem; ``simpcert sweep`` tabulates
bounds along one parameter axis as CSV.  The same entry point is callable
from Python.
"""

from simpcert.cli import main

print("$ simpcert eval --f x^4 --a 0 --b 1 --theorem T2_1 --h t")
status = main(["eval", "--f", "x^4", "--a", "0", "--b", "1", "--theorem", "T2_1", "--h", "t"])
print("exit status", status)

print("\n$ simpcert eval --f x^4 --a 0 --b 1 --theorem T3_1 --alpha 1 --m 1 --q 2 --format json")
main(["eval", "--f", "x^4", "--a", "0", "--b", "1", "--theorem", "T3_1", "--alpha", "1", "--m", "1",
      "--q", "2", "--format", "json"])

# with h = t^s the h-convex bound coincides with the s-convex one at every s
print("\n$ simpcert sweep --f x^4 --a 0 --b 1 --theorem T2_1 --theorem A --h t^s --axis s --range 0.2:1:0.2")
main(["sweep", "--f", "x^4", "--a", "0", "--b", "1", "--theorem", "T2_1", "--theorem", "A", "--h", "t^s",
      "--axis", "s", "--range", "0.2:1:0.2"])

print("\n$ simpcert eval --f 'x^4 +' --a 1 --b 0 --theorem T2_2")
print("exit status", main(["eval", "--f", "x^4 +", "--a", "1", "--b", "0", "--theorem", "T2_2"]))
