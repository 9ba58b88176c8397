"""Replay the two benchmark gap ledgers and print each entry."""
from piopt.benchmarks import optimal_benchmark, relaxed_program_value, verify_gap_regular, \
    verify_gap_triangle

b_star = optimal_benchmark()
res = relaxed_program_value(b_star)
print(f"B* scale {b_star.scale:.10f}, normalized: {res.normalized}")
print(f"max B*/OPT = {res.value:.6f} at qbar = {res.argmax}, min = {res.min_ratio:.10f}")

for rep in (verify_gap_triangle(), verify_gap_regular()):
    print(f"\n{rep.name}: beta = {rep.beta:.9f}, beta' = {rep.beta_prime:.9f}, "
          f"margin = {rep.margin:.3e}, holds = {rep.holds}")
    for e in rep.ledger:
        mark = "ok " if e.holds else "BAD"
        print(f"  [{mark}] {e.name}: bound {e.bound:.9g}, computed {e.computed:.9g}")
