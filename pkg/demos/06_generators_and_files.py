"""Seeded instance generators and the text file formats.

Files are 1-based; the Python API is 0-based. The same files drive the
``slicescale`` command (check, scale, bench, gen).
"""
# %%
import tempfile
from pathlib import Path

from slicescale import generate_feasible, generate_infeasible_2mode
from slicescale import io as sio

B, s = generate_feasible((3, 2, 2), density=0.7, seed=11)
print(sio.format_tensor(B))
print(sio.format_vectors(s, "targets"))

# %% Same seed, same instance, on every platform.
print(generate_feasible((3, 2, 2), 0.7, 11)[0] == B)

# %% Write, read back, and mirror as JSON.
with tempfile.TemporaryDirectory() as tmp:
    p = Path(tmp) / "inst.tensor"
    sio.write_tensor(p, B)
    print(sio.read_tensor(p) == B)
    sio.write_tensor(Path(tmp) / "inst.tensor.json", B)
    print((Path(tmp) / "inst.tensor.json").read_text()[:80], "...")

# %% Malformed input names the offending line.
try:
    sio.parse_tensor("tensor v1\nmodes 2\ndims 2 x\n")
except sio.FormatError as exc:
    print(exc)

# %% An infeasible matrix instance.
B, s = generate_infeasible_2mode(3, seed=5)
print(B.to_dense().round(3))
print([v.round(3).tolist() for v in s.vectors])
