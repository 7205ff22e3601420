"""SOFF mesh files.

Layout: ``SOFF s``, ``V F``, V lines ``x y z``, F lines ``3 i j k`` and, for s = 2, one
``edge-node i j x y z`` line per edge. Indices are zero-based.
"""

from pathlib import Path
from typing import Union

import numpy as np

from feeclab.core.exceptions import ValidationError
from feeclab.geometry.mesh import SurfaceMesh

HEADER = "SOFF"
EDGE_NODE = "edge-node"


def _number(value: float) -> str:
    return repr(float(value))


def write_soff(mesh: SurfaceMesh, path: Union[str, Path]) -> None:
    """Write a mesh with its geometry nodes."""
    lines = [f"{HEADER} {mesh.order}", f"{len(mesh.vertices)} {len(mesh.triangles)}"]
    lines.extend(" ".join(_number(c) for c in vertex) for vertex in mesh.vertices)
    lines.extend("3 " + " ".join(str(int(i)) for i in tri) for tri in mesh.triangles)
    if mesh.order == 2 and mesh.edge_nodes is not None:  # noqa: PLR2004
        for (i, j), node in zip(mesh.edges, mesh.edge_nodes):
            coords = " ".join(_number(c) for c in node)
            lines.append(f"{EDGE_NODE} {int(i)} {int(j)} {coords}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_soff(path: Union[str, Path]) -> SurfaceMesh:
    """Read a mesh written by :func:`write_soff`.

    Raises
    ------
        ValidationError: The file is malformed

    """
    rows = [
        line.split()
        for line in Path(path).read_text(encoding="utf-8").splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    ]
    try:
        if rows[0][0] != HEADER:
            raise ValidationError("path", f"missing {HEADER} header", str(path))
        order = int(rows[0][1])
        n_vertices, n_triangles = int(rows[1][0]), int(rows[1][1])
        vertex_rows = rows[2 : 2 + n_vertices]
        face_rows = rows[2 + n_vertices : 2 + n_vertices + n_triangles]
        node_rows = rows[2 + n_vertices + n_triangles :]
        if len(vertex_rows) != n_vertices or len(face_rows) != n_triangles:
            raise ValidationError("path", "truncated file", str(path))
        if any(row[0] != "3" for row in face_rows):
            raise ValidationError("path", "only triangular faces are supported", str(path))
        vertices = np.array([[float(c) for c in row[:3]] for row in vertex_rows])
        triangles = np.array([[int(i) for i in row[1:4]] for row in face_rows], dtype=np.int64)
    except (IndexError, ValueError) as e:
        raise ValidationError("path", f"malformed SOFF file: {e}", str(path)) from e
    mesh = SurfaceMesh(vertices=vertices, triangles=triangles)
    if order == 1:
        return mesh
    lookup = {(int(i), int(j)): n for n, (i, j) in enumerate(mesh.edges)}
    nodes = np.full((len(mesh.edges), 3), np.nan)
    for row in node_rows:
        if row[0] != EDGE_NODE:
            raise ValidationError("path", f"unexpected record {row[0]!r}", str(path))
        i, j = sorted((int(row[1]), int(row[2])))
        if (i, j) not in lookup:
            raise ValidationError("path", f"edge ({i}, {j}) is not a mesh edge", str(path))
        nodes[lookup[(i, j)]] = [float(c) for c in row[3:6]]
    if np.isnan(nodes).any():
        raise ValidationError("path", "missing edge nodes", str(path))
    return SurfaceMesh(vertices=vertices, triangles=triangles, order=order, edge_nodes=nodes)
