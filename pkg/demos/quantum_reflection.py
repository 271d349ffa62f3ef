"""Verify the odd quantum reflection of the affine super Yangian for sl(3|2).

The images of the level-0/1 relations are expanded into words over the
target generators and straightened by the rewrite engine.  A relation is
verified when its image reduces to exactly zero.  Takes about a minute.

Run: python3 demos/quantum_reflection.py
"""

from superyang import build_system, complete, quantum_reflection, resolve_signs, rules_from, verify_image

system = build_system("00011", affine=True)
gmap = resolve_signs(quantum_reflection(system, 3))
print(f"{gmap.map_id}: signs {gmap.status}")
print(dict(zip(gmap.sign_names, gmap.signs)))

rules = complete(rules_from(gmap.target, 6, 1))
print(f"\nrewrite system: {len(rules.rules)} rules at degree 6, level 1")

shift = next(r for r in gmap.source.relations if r.id == "shift(2,3,+)")
outcome = verify_image(gmap, shift, rules, gmap.signs)
print(f"\n{shift.id}: {outcome.status}")
for summand, normal_form in outcome.summands:
    print(f"  {summand:<30} -> {normal_form}")

# A wrong sign is never declared false, only left with a nonzero residual.
bad = gmap.flip("c+3")
cross = next(r for r in bad.source.relations if r.id == "cross(3,3)")
outcome = verify_image(bad, cross, rules, bad.signs)
print(f"\nwith c+3 flipped, {cross.id}: {outcome.status}, residual {outcome.residual}")
