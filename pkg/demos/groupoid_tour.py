"""Walk around the Weyl groupoid of sl(3|2).

Run: python3 demos/groupoid_tour.py
"""

from superyang import build_system, cartan_matrix, dynkin, orbit, reflect_system, shortest_path

# The distinguished system: three epsilons then two deltas, one odd node (3).
start = build_system("00011")
print(start.describe())
print(dynkin(start))
print(cartan_matrix(start))

# An odd reflection swaps an epsilon and a delta and changes the diagram.
after = reflect_system(start, 3)
print("\nreflect at node 3 ->", after.describe())
print(dynkin(after))
print(cartan_matrix(after))

# Every arrangement of the letters is reachable: binomial(5, 2) = 10 vertices.
graph = orbit(start)
print(f"\norbit of {start.parity_word}: {len(graph.vertices)} parity words")
print(" ".join(graph.vertices))

path = shortest_path(start, build_system("11000"))
print(f"\nshortest route to 11000 uses {len(path)} reflections: nodes {path.nodes}")
print("edge parities:", ", ".join(path.parity_trace))

# The affine diagram is a cycle; node 0 closes it.
affine = build_system("00011", affine=True)
print("\n" + dynkin(affine))
print(f"affine orbit size: {len(orbit(affine).vertices)}")
