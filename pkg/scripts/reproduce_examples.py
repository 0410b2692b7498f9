import json
import sys
import time
from pathlib import Path

# Ensure repo root is on sys.path so the packages import when running this file directly
ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from cli.app import configure_logging
from cli.meshfile import read_mesh
from tmesh_spline.mesh import extend
from tmesh_spline.spline import (
    census,
    construct_basis,
    dim_spline_space,
    dim_unrestricted_formula,
    ledger,
    order_ledges,
    verify_basis,
)


def pretty(obj):
    try:
        return json.dumps(obj, indent=2, default=str)
    except Exception:
        return str(obj)


def biquadratic():
    print("Biquadratic mesh with one isolated cell...")
    hm = read_mesh(ROOT / "meshes" / "biquadratic_isolated_cell.json").mesh
    report = dim_spline_space(hm)
    c = report.census
    print(pretty({"census": c.__dict__, "dims": report.values, "unrestricted": dim_unrestricted_formula(c)}))


def bicubic():
    print("\nBicubic mesh with three isolated subdomains...")
    hm = read_mesh(ROOT / "meshes" / "bicubic_three_regions.json").mesh
    start = time.perf_counter()
    report = dim_spline_space(hm, with_ledger=True)
    print(pretty({"census": report.census.__dict__, "dims": report.values, "agreement": report.agreement}))
    print("dimension paths:", f"{time.perf_counter() - start:.2f}s")

    start = time.perf_counter()
    extended = extend(hm.mesh, hm.m, hm.n)
    ordered = order_ledges(extended, hm.forest, hm.m, hm.n)
    fns = construct_basis(extended, ordered)
    verification = verify_basis(fns, extended, hm.m, hm.n)
    per_level = {}
    for f in fns:
        per_level[f.provenance.level] = per_level.get(f.provenance.level, 0) + 1
    print(pretty({"per_level": per_level, "total": len(fns), "verification": verification.__dict__}))
    print(pretty([row._asdict() for row in ledger(ordered, census(extended, hm.forest), hm.m, hm.n)]))
    print("basis:", f"{time.perf_counter() - start:.2f}s")


def run():
    configure_logging()
    biquadratic()
    bicubic()


if __name__ == "__main__":
    run()
