"""Regenerate unit_square_unstructured.msh: a Delaunay triangulation of
jittered points in the unit square, written in gmsh 2.2 ASCII format."""

import numpy as np
from scipy.spatial import Delaunay

rng = np.random.default_rng(7)
n_side = 10
edge = np.linspace(0.0, 1.0, n_side + 1)
boundary = []
for t in edge[:-1]:
    boundary += [(t, 0.0), (1.0, t), (1.0 - t, 1.0), (0.0, 1.0 - t)]
interior = []
while len(interior) < 80:
    p = rng.uniform(0.06, 0.94, size=2)
    if all(np.hypot(*(p - q)) > 0.07 for q in interior):
        interior.append(p)
points = np.array(boundary + [tuple(p) for p in interior])
tri = Delaunay(points).simplices

# Boundary edges: triangle edges used by a single triangle.
count = {}
for t in tri:
    for i in range(3):
        e = tuple(sorted((t[i], t[(i + 1) % 3])))
        count[e] = count.get(e, 0) + 1
edges = sorted(e for e, c in count.items() if c == 1)

with open("unit_square_unstructured.msh", "w") as f:
    f.write("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n")
    f.write('$PhysicalNames\n2\n1 1 "boundary"\n2 2 "domain"\n$EndPhysicalNames\n')
    f.write(f"$Nodes\n{len(points)}\n")
    for i, (x, y) in enumerate(points):
        f.write(f"{i + 1} {float(x)!r} {float(y)!r} 0\n")
    f.write("$EndNodes\n")
    f.write(f"$Elements\n{len(edges) + len(tri)}\n")
    k = 1
    for a, b in edges:
        f.write(f"{k} 1 2 1 1 {a + 1} {b + 1}\n")
        k += 1
    for t in tri:
        f.write(f"{k} 2 2 2 2 {t[0] + 1} {t[1] + 1} {t[2] + 1}\n")
        k += 1
    f.write("$EndElements\n")
print(len(tri), "triangles")
