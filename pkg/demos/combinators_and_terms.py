"""Find the (k, s) pairs of a small OPCA, compile λ-terms and evaluate them."""

from opcalab import C2, V3, bracket_abstract, find_ks, parse_term
from opcalab.terms import completeness_violation, eval_closed, format_term

for a in (C2, V3):
    pairs = [(a.element(k), a.element(s)) for k, s in find_ks(a)]
    cs = a.combinators
    print(f"{a.name}: {len(pairs)} valid (k, s) pairs {pairs}")
    print(f"  chosen k={a.element(a.k)} s={a.element(a.s)}, i={a.element(cs.i)} p={a.element(cs.p)}")

# λ*x y. y x compiles right to left into a single element of V3
body = parse_term("y x", V3, ["x", "y"])
swap = bracket_abstract(V3, body, ["x", "y"])
print(f"λ*x y. {format_term(body, V3)} = {V3.element(swap)}")
assert completeness_violation(V3, body, ["x", "y"], swap) is None

# β-reducts are only upper bounds: (λx y. x) 1 0 may land below 1
for text in ["(\\x. x) 0", "(\\x y. x) 1 0", "1 0"]:
    print(f"{text!r} in C2 evaluates to {C2.element(eval_closed(C2, parse_term(text, C2)))}")
