#!/usr/bin/env python3
"""Smoke test for the relscat_py extension module.

Locates the built cdylib under target/, exposes it under the importable
module name, and exercises the bound API end to end on a small grid.
Run `cargo build -p relscat-py` first, then `python3 python/smoke_test.py`.
"""

import json
import math
import pathlib
import shutil
import sys
import tempfile


def locate_cdylib() -> pathlib.Path:
    root = pathlib.Path(__file__).resolve().parent.parent
    candidates = []
    for profile in ("debug", "release"):
        for name in ("librelscat_py.so", "librelscat_py.dylib", "relscat_py.dll"):
            p = root / "target" / profile / name
            if p.exists():
                candidates.append(p)
    if not candidates:
        sys.exit("librelscat_py not found under target/; run `cargo build -p relscat-py` first")
    return max(candidates, key=lambda p: p.stat().st_mtime)


def main() -> None:
    lib = locate_cdylib()
    tmp = tempfile.mkdtemp(prefix="relscat_py_")
    shutil.copy(lib, pathlib.Path(tmp) / "relscat_py.so")
    sys.path.insert(0, tmp)
    import relscat_py as rs

    # special functions against fixed references
    assert abs(rs.j0(1.0) - 0.7651976865579666) < 1e-14
    assert abs(rs.n0(1.0) - 0.08825696421567696) < 1e-14
    assert abs(rs.h0(1.0) - 0.5686566270482880) < 1e-13

    # the two boundary kernels are complex conjugates of each other
    gp = rs.kernel_g(1.0, 2.5, "plus")
    gm = rs.kernel_g(1.0, 2.5, "minus")
    assert abs(gp - gm.conjugate()) < 1e-14

    config = {
        "grid": {"l": 6.0, "n": 16},
        "potential": {"kind": "power", "sigma": 2.5, "coupling": 0.3},
        "k": [1.0, 0.0],
        "branch": "plus",
    }
    field = rs.solve(json.dumps(config))
    assert field.residual_norm < 1e-10
    assert field.branch == "plus"
    assert abs(field.wavenumber - 1.0) < 1e-15
    assert len(field.values()) == 16 * 16

    # off-grid evaluation reproduces a grid node
    nodes = field.nodes()
    values = field.values()
    x, y = nodes[40]
    assert abs(field.value_at(x, y) - values[40]) < 1e-10

    # far field is symmetric across the incident direction for a radial potential
    f_up = field.far_amplitude(0.7)
    f_dn = field.far_amplitude(-0.7)
    assert abs(f_up - f_dn) < 1e-10

    # |phi - phi0| decays along a ray once the Born tail is attached
    field.with_born_tail(300.0)
    scan = field.diff_scan(0.0, 20.0, 200.0, 12)
    slope, r2, degenerate = rs.power_law_slope(scan, 15.0, 250.0)
    assert slope < -0.1, f"no decay: slope {slope}"

    # invalid input surfaces as ValueError
    bad = dict(config, grid={"l": 6.0, "n": 7})
    try:
        rs.solve(json.dumps(bad))
    except ValueError:
        pass
    else:
        sys.exit("expected ValueError for an odd grid")

    print("smoke test passed:", lib)


if __name__ == "__main__":
    main()
