"""Reproduce the behavioural property matrix at a small trial count.

`yes` cells survived the random corpus; `no` cells reproduced their
hand-built counterexample.  The full 200-trial run is the `provlog check
--all` command (or the acceptance suite).
"""

from provlog import run_table1

report = run_table1(trials=25, seed=11)
print(report.format_text())
print()
print("matrix ok:", report.ok)
