"""Loop-puzzle reduction toolkit.

Solvers and verifiers for Barred Simple Loop and four loop genres
(Slitherlink, Masyu, Yajilin, Simple Loop), a compiler from Barred Simple
Loop to its cubic restriction and on to genre puzzles via must-visit
tile gadgets, solution lifting through both reductions, and a gadget
certification harness.
"""

__version__ = "0.1.0"
