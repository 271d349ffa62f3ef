"""Check a classical reflection map on explicit supermatrices.

The map at an odd node sends the generators of the reflected algebra to
brackets of the original generators.  Each image carries a sign; the search
fixes the signs so that every defining relation holds, and flipping any one
of them breaks a relation with a visible nonzero residual.

Run: python3 demos/classical_reflections.py
"""

from superyang import build_system, check_assignment, classical_reflection, resolve_and_verify

system = build_system("00011")
assignment = classical_reflection(system, 3)

print("images before sign resolution:")
for key, text in assignment.describe().items():
    print(f"  {key:>10} -> {text}")

resolved, report = resolve_and_verify(assignment)
print(f"\nstatus {report.status}, all relations hold: {report.ok}, inverse composes to id: {report.bijective}")
print("signs:", dict(zip(report.sign_names, report.resolved_signs)))

broken = check_assignment(resolved.flip("c+3"))
print("\nafter flipping c+3:")
for check in broken.failures()[:4]:
    print(f"  {check.id} {check.instance} fails")
