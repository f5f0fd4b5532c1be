"""Command-line pipeline: simulate -> reconstruct -> assemble/compare -> demo.

Persistent formats
------------------
Datasets and moment sets are a JSON manifest plus a raw binary payload:
64-bit IEEE-754 little-endian values, row-major.  Dataset payloads are
time-major (node j is row j); moment payloads are order-major.  Manifests
carry an FNV-1a 64-bit checksum of the payload, verified on every read, so a
write/read round trip is bit-exact or fails loudly.

Exit codes: 0 success, 2 simulation-quality failure, 3 insufficient time
samples, 4 missing reference, 1 anything else.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .assembly import TaylorReconstruction, assemble, compare
from .numerics import GridField, PhysicalConstants, SpatialGrid, TimeNodes
from .potentials import (
    PotentialModel,
    free_potential,
    harmonic_potential,
    model_from_dict,
    model_to_dict,
    paul_trap_potential,
    polynomial_potential,
    quartic_potential,
)
from .reconstruction import InsufficientTimeSamplesError, MomentField, build_pyramid
from .simulator import (
    CatStateParams,
    SimulationQualityError,
    WaveFunction,
    cat_state_density_matrix,
    cat_state_moment,
    exact_density_matrix,
    gaussian_packet,
    make_cat_state,
    offdiagonal_lattice,
    probability_density,
    propagate,
)

__all__ = [
    "MissingReferenceError",
    "DataFormatError",
    "fnv1a64",
    "write_dataset",
    "read_dataset",
    "write_moment_set",
    "read_moment_set",
    "cmd_simulate",
    "cmd_reconstruct",
    "cmd_assemble_compare",
    "cmd_demo_cat",
    "main",
]

FORMAT_VERSION = 1
#: Default internal propagation step; node intervals are subdivided to stay
#: at or below this.
MAX_INTERNAL_STEP = 1e-3

CAT_DEFAULTS = CatStateParams()


class MissingReferenceError(ValueError):
    """The requested comparison reference cannot be resolved."""


class DataFormatError(ValueError):
    """A manifest or payload is malformed or fails its checksum."""


def fnv1a64(data: bytes) -> str:
    """FNV-1a 64-bit hash of a byte string, as a fixed-width hex string."""
    h = 0xCBF29CE484222325
    for b in data:
        h ^= b
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return f"{h:016x}"


def _worker_cap() -> int:
    raw = os.environ.get("HYDREC_THREADS", "")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return max(1, os.cpu_count() or 1)


def _dump_json(path: Path, obj: dict) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _load_json(path: Path) -> dict:
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise DataFormatError(f"{path} is not valid JSON: {exc}") from exc


def _write_payload(path: Path, array: np.ndarray) -> str:
    data = np.ascontiguousarray(array).astype(array.dtype.newbyteorder("<")).tobytes()
    path.write_bytes(data)
    return fnv1a64(data)


def _read_payload(path: Path, checksum: str, dtype, shape) -> np.ndarray:
    data = path.read_bytes()
    expected = int(np.prod(shape)) * np.dtype(dtype).itemsize
    if len(data) != expected:
        raise DataFormatError(
            f"{path} holds {len(data)} bytes, expected {expected} for shape {shape}"
        )
    actual = fnv1a64(data)
    if actual != checksum:
        raise DataFormatError(f"{path} checksum {actual} does not match manifest {checksum}")
    return np.frombuffer(data, dtype=np.dtype(dtype).newbyteorder("<")).reshape(shape).copy()


# ---------------------------------------------------------------------------
# dataset manifests
# ---------------------------------------------------------------------------


def write_dataset(
    out_dir: Path,
    constants: PhysicalConstants,
    grid: SpatialGrid,
    nodes: TimeNodes,
    model: PotentialModel,
    records: np.ndarray,
    state: dict,
    provenance: str,
    psis: np.ndarray | None = None,
) -> Path:
    """Write f0 records (and optionally wavefunctions) plus their manifest."""
    out_dir.mkdir(parents=True, exist_ok=True)
    records = np.asarray(records, dtype="<f8")
    if records.shape != (nodes.m_plus_1, grid.n_points):
        raise ValueError("records shape must be (m+1, n_points)")
    checksum = _write_payload(out_dir / "f0.bin", records)
    manifest = {
        "format_version": FORMAT_VERSION,
        "kind": "hydrec-dataset",
        "constants": {"hbar": constants.hbar, "mass": constants.mass},
        "grid": {"x_min": grid.x_min, "x_max": grid.x_max, "n_points": grid.n_points},
        "times": {"t_0": nodes.t_0, "dt": nodes.dt, "m_plus_1": nodes.m_plus_1},
        "potential": model_to_dict(model),
        "state": state,
        "data_path": "f0.bin",
        "layout": "time_major_rows",
        "checksum": checksum,
        "provenance": provenance,
    }
    if psis is not None:
        psis = np.asarray(psis, dtype="<c16")
        manifest["psi_path"] = "psi.bin"
        manifest["psi_checksum"] = _write_payload(out_dir / "psi.bin", psis)
    path = out_dir / "dataset.json"
    _dump_json(path, manifest)
    return path


def read_dataset(manifest_path: Path) -> dict:
    """Load and verify a dataset; returns typed objects plus the raw manifest."""
    manifest_path = Path(manifest_path)
    m = _load_json(manifest_path)
    if m.get("kind") != "hydrec-dataset":
        raise DataFormatError(f"{manifest_path} is not a dataset manifest")
    if m.get("layout") != "time_major_rows":
        raise DataFormatError(f"unsupported dataset layout {m.get('layout')!r}")
    grid = SpatialGrid(**m["grid"])
    nodes = TimeNodes(**m["times"])
    constants = PhysicalConstants(**m["constants"])
    model = model_from_dict(m["potential"])
    records = _read_payload(
        manifest_path.parent / m["data_path"],
        m["checksum"],
        "f8",
        (nodes.m_plus_1, grid.n_points),
    )
    out = {
        "manifest": m,
        "grid": grid,
        "nodes": nodes,
        "constants": constants,
        "model": model,
        "records": records,
    }
    if "psi_path" in m:
        out["psis"] = _read_payload(
            manifest_path.parent / m["psi_path"],
            m["psi_checksum"],
            "c16",
            (nodes.m_plus_1, grid.n_points),
        )
    return out


# ---------------------------------------------------------------------------
# moment-set files
# ---------------------------------------------------------------------------


def write_moment_set(
    out_dir: Path,
    dataset_manifest: dict,
    moments: list[MomentField],
    node: int,
    smoothing: tuple[int, int] | None,
    dataset_path: str = "",
) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    array = np.stack([m.field.values for m in moments]).astype("<f8")
    checksum = _write_payload(out_dir / "moments.bin", array)
    record = {
        "format_version": FORMAT_VERSION,
        "kind": "hydrec-moments",
        "constants": dataset_manifest["constants"],
        "grid": dataset_manifest["grid"],
        "potential": dataset_manifest["potential"],
        "state": dataset_manifest.get("state", {}),
        "dataset_manifest": dataset_path,
        "dataset_checksum": dataset_manifest["checksum"],
        "central_time": moments[0].time,
        "node": node,
        "order_max": len(moments) - 1,
        "smoothing": None if smoothing is None else {"window": smoothing[0], "degree": smoothing[1]},
        "data_path": "moments.bin",
        "layout": "order_major_rows",
        "checksum": checksum,
    }
    path = out_dir / "moments.json"
    _dump_json(path, record)
    return path


def read_moment_set(path: Path) -> dict:
    path = Path(path)
    m = _load_json(path)
    if m.get("kind") != "hydrec-moments":
        raise DataFormatError(f"{path} is not a moment-set file")
    grid = SpatialGrid(**m["grid"])
    n_orders = m["order_max"] + 1
    array = _read_payload(
        path.parent / m["data_path"], m["checksum"], "f8", (n_orders, grid.n_points)
    )
    constants = PhysicalConstants(**m["constants"])
    moments = [
        MomentField(
            order=n,
            time_node=m["node"],
            time=m["central_time"],
            field=GridField(grid, array[n]),
        )
        for n in range(n_orders)
    ]
    return {
        "manifest": m,
        "grid": grid,
        "constants": constants,
        "moments": moments,
    }


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------


def _parse_grid(text: str) -> SpatialGrid:
    try:
        x_min, x_max, n = text.split(",")
        return SpatialGrid(float(x_min), float(x_max), int(n))
    except ValueError as exc:
        raise ValueError(f"--grid expects 'xmin,xmax,n', got {text!r}") from exc


def _parse_times(text: str) -> TimeNodes:
    try:
        t0, dt, m = text.split(",")
        return TimeNodes(float(t0), float(dt), int(m) + 1)
    except ValueError as exc:
        raise ValueError(f"--times expects 't0,dt,m', got {text!r}") from exc


def _parse_potential(text: str, mass: float) -> PotentialModel:
    kind, _, body = text.partition(":")
    params = {}
    if body:
        for item in body.split(","):
            key, _, value = item.partition("=")
            if not value:
                raise ValueError(f"potential parameter {item!r} is not key=value")
            params[key.strip()] = value.strip()
    if kind == "free":
        return free_potential()
    if kind == "harmonic":
        return harmonic_potential(float(params["omega"]), mass=mass)
    if kind == "quartic":
        return quartic_potential(
            c2=float(params.get("c2", 0.0)), c4=float(params.get("c4", 0.0))
        )
    if kind == "paul_trap":
        return paul_trap_potential(
            float(params["a"]), float(params["b"]), float(params["big_omega"]), mass=mass
        )
    if kind == "polynomial":
        rows = [
            [float(c) for c in group.split("/")] for group in params["coeffs"].split(";")
        ]
        return polynomial_potential(rows)
    raise ValueError(f"unknown potential kind {kind!r}")


def _parse_smooth(text: str) -> tuple[int, int]:
    try:
        window, degree = text.split(",")
        return int(window), int(degree)
    except ValueError as exc:
        raise ValueError(f"--smooth expects 'window,degree', got {text!r}") from exc


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _substeps(dt: float, override: int | None) -> int:
    if override is not None:
        return max(1, override)
    return max(8, int(np.ceil(abs(dt) / MAX_INTERNAL_STEP)))


def _prepare_state(args, grid: SpatialGrid, constants: PhysicalConstants, model) -> tuple:
    if args.state == "cat":
        params = CatStateParams(sigma=args.sigma, k0=args.k0)
        psi = make_cat_state(params, grid)
        state = {"kind": "cat", "sigma": params.sigma, "k0": params.k0}
    elif args.state == "gaussian":
        psi = gaussian_packet(
            grid, args.sigma, center=args.center, momentum=args.momentum, hbar=constants.hbar
        )
        state = {
            "kind": "gaussian",
            "sigma": args.sigma,
            "center": args.center,
            "momentum": args.momentum,
        }
    elif args.state == "coherent":
        if model.kind != "harmonic":
            raise ValueError("the coherent state needs a harmonic potential (its width is set by omega)")
        omega = float(model.params["omega"])
        sigma = float(np.sqrt(constants.hbar / (2.0 * constants.mass * omega)))
        psi = gaussian_packet(
            grid, sigma, center=args.center, momentum=args.momentum, hbar=constants.hbar
        )
        state = {
            "kind": "coherent",
            "sigma": sigma,
            "center": args.center,
            "momentum": args.momentum,
        }
    else:
        raise ValueError(f"unknown state {args.state!r}")
    return psi, state


def cmd_simulate(args) -> int:
    constants = PhysicalConstants(hbar=args.hbar, mass=args.mass)
    grid = _parse_grid(args.grid)
    nodes = _parse_times(args.times)
    model = _parse_potential(args.potential, constants.mass)
    psi, state = _prepare_state(args, grid, constants, model)

    # State is prepared at t = 0; walk to t_0 (possibly backward), then node
    # to node with a fixed substep count so solver error is smooth in time.
    if nodes.t_0 != 0.0:
        n0 = _substeps(nodes.t_0, args.substeps)
        psi = propagate(psi, model, constants, nodes.t_0 / n0, n0, t_start=0.0)
    records = [probability_density(psi).values]
    psis = [psi.amplitudes]
    sub = _substeps(nodes.dt, args.substeps)
    for j in range(nodes.m):
        psi = propagate(
            psi, model, constants, nodes.dt / sub, sub, t_start=nodes.t_0 + j * nodes.dt
        )
        records.append(probability_density(psi).values)
        psis.append(psi.amplitudes)
    records = np.stack(records)

    if args.noise > 0.0:
        rng = np.random.default_rng(args.seed)
        records = np.clip(records + rng.normal(0.0, args.noise, records.shape), 0.0, None)

    provenance = (
        f"simulator: state={args.state} potential={args.potential} grid={args.grid} "
        f"times={args.times} hbar={args.hbar} mass={args.mass} noise={args.noise} "
        f"seed={args.seed} substeps={sub}"
    )
    path = write_dataset(
        Path(args.out),
        constants,
        grid,
        nodes,
        model,
        records,
        state,
        provenance,
        psis=np.stack(psis) if args.store_psi else None,
    )
    print(path)
    return 0


def cmd_reconstruct(args) -> int:
    data = read_dataset(Path(args.dataset))
    nodes: TimeNodes = data["nodes"]
    node = nodes.central_index if args.node is None else args.node
    if not (0 <= node <= nodes.m):
        raise ValueError(f"node {node} outside 0..{nodes.m}")
    smoothing = _parse_smooth(args.smooth) if args.smooth else None
    pyramid = build_pyramid(
        [GridField(data["grid"], row) for row in data["records"]],
        data["grid"],
        nodes,
        data["model"],
        data["constants"],
        order_max=args.order,
        smoothing=smoothing,
    )
    moments = [pyramid.moment(n, node) for n in range(args.order + 1)]
    path = write_moment_set(
        Path(args.out), data["manifest"], moments, node, smoothing,
        dataset_path=str(args.dataset),
    )
    print(path)
    return 0


def _emit_density_grid(out_dir: Path, tag: str, rec: TaylorReconstruction) -> None:
    grid = rec.values.x_grid
    y = rec.values.y
    vals = rec.values.values.astype("<c16")
    checksum = _write_payload(out_dir / f"rho_{tag}.bin", vals)
    _dump_json(
        out_dir / f"rho_{tag}.json",
        {
            "format_version": FORMAT_VERSION,
            "kind": "hydrec-density-grid",
            "grid": {"x_min": grid.x_min, "x_max": grid.x_max, "n_points": grid.n_points},
            "y": {"y_max": float(np.max(np.abs(y))), "n_points": int(y.size)},
            "order_max": rec.order_max,
            "hbar": rec.hbar,
            "data_path": f"rho_{tag}.bin",
            "layout": "x_major_rows_complex128",
            "checksum": checksum,
            "trust_radius": rec.trust_radius(),
        },
    )
    x = grid.points
    with open(out_dir / f"rho_{tag}.dat", "w") as fh:
        fh.write("# x y re im\n")
        for i in range(x.size):
            for j in range(y.size):
                v = rec.values.values[i, j]
                fh.write(f"{x[i]!r} {y[j]!r} {v.real!r} {v.imag!r}\n")


def _resolve_reference(args, mset: dict):
    """Reference density matrix for comparison, on the reconstruction lattice."""
    manifest = mset["manifest"]
    grid: SpatialGrid = mset["grid"]
    y = offdiagonal_lattice(args.y_max, args.n_y)
    if args.reference == "analytic-cat":
        state = manifest.get("state", {})
        if state.get("kind") == "cat":
            params = CatStateParams(sigma=state["sigma"], k0=state["k0"])
        else:
            params = CatStateParams(sigma=args.ref_sigma, k0=args.ref_k0)
        return cat_state_density_matrix(params, grid, y)
    if args.reference == "stored-psi":
        dataset_path = Path(args.dataset) if args.dataset else None
        if dataset_path is None or not dataset_path.exists():
            raise MissingReferenceError(
                "reference 'stored-psi' needs --dataset pointing at a manifest with wavefunctions"
            )
        data = read_dataset(dataset_path)
        if "psis" not in data:
            raise MissingReferenceError(
                f"{dataset_path} stores no wavefunctions (simulate with --store-psi)"
            )
        node = manifest["node"]
        psi = WaveFunction(data["grid"], data["psis"][node])
        return exact_density_matrix(psi, y=y)
    raise MissingReferenceError(f"unknown reference {args.reference!r}")


def cmd_assemble_compare(args, with_reference: bool) -> int:
    mset = read_moment_set(Path(args.moments))
    constants: PhysicalConstants = mset["constants"]
    if args.n_y % 2 == 0:
        raise ValueError("--n-y must be odd so the lattice contains y = 0")
    y = offdiagonal_lattice(args.y_max, args.n_y)
    rec = assemble(mset["moments"], y, constants.hbar)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    tag = f"N{rec.order_max}"
    _emit_density_grid(out_dir, tag, rec)

    lines = [
        f"order_max        {rec.order_max}",
        f"x grid           [{rec.values.x_grid.x_min}, {rec.values.x_grid.x_max}] "
        f"x {rec.values.x_grid.n_points}",
        f"y lattice        [-{args.y_max}, {args.y_max}] x {args.n_y}",
        f"trust radius     {rec.trust_radius():.6g}",
        f"hermiticity      {rec.values.hermiticity_defect():.3e}",
    ]
    if with_reference:
        reference = _resolve_reference(args, mset)
        region = (args.region_x, args.region_y)
        report = compare(rec.values, reference, region=region, f0=rec.moments[0].field)
        _dump_json(out_dir / f"report_{tag}.json", report.as_dict())
        lines += [
            f"reference        {args.reference}",
            f"region           |x| <= {args.region_x}, |y| <= {args.region_y}",
            f"sup error        {report.sup_error:.6e}",
            f"l2 error         {report.l2_error:.6e}",
            f"trace (rec/ref)  {report.trace_a:.9g} / {report.trace_b:.9g}",
            f"diagonal vs f0   {report.diagonal_mismatch:.3e}",
        ]
    (out_dir / f"summary_{tag}.txt").write_text("\n".join(lines) + "\n")
    print(out_dir / f"summary_{tag}.txt")
    return 0


def cmd_demo_cat(args) -> int:
    """Reconstruct the superposition-state density matrix at several orders.

    Uses the analytic moment oracle of the default cat state, assembles each
    requested Taylor order, and reports sup errors against the closed-form
    density matrix over |x| <= 3, |y| <= 1.5.
    """
    orders = sorted(int(n) for n in args.orders.split(","))
    if any(n < 0 for n in orders):
        raise ValueError("orders must be >= 0")
    constants = PhysicalConstants(hbar=args.hbar, mass=args.mass)
    params = CAT_DEFAULTS
    grid = _parse_grid(args.grid)
    y = offdiagonal_lattice(args.y_max, args.n_y)

    x = grid.points
    n_max = max(orders)
    moments = [
        MomentField(
            order=n,
            time_node=0,
            time=0.0,
            field=GridField(grid, cat_state_moment(params, n, x, hbar=constants.hbar)),
        )
        for n in range(n_max + 1)
    ]
    exact = cat_state_density_matrix(params, grid, y)
    mask_x = np.abs(x) <= 3.0
    mask_y = np.abs(y) <= 1.5

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    def one(order: int):
        rec = assemble(moments[: order + 1], y, constants.hbar)
        err = np.abs(rec.values.values.real - exact.values.real)[np.ix_(mask_x, mask_y)]
        _emit_density_grid(out_dir, f"N{order}", rec)
        return order, float(err.max()), rec.trust_radius()

    with ThreadPoolExecutor(max_workers=min(_worker_cap(), len(orders))) as pool:
        results = sorted(pool.map(one, orders))

    summary = {
        "state": {"kind": "cat", "sigma": params.sigma, "k0": params.k0},
        "hbar": constants.hbar,
        "region": {"x_max": 3.0, "y_max": 1.5},
        "orders": [
            {"order": n, "sup_error_real": e, "trust_radius": r} for n, e, r in results
        ],
    }
    _dump_json(out_dir / "demo_summary.json", summary)
    text = ["order   sup|Re rho_N - Re rho|   trust radius"]
    text += [f"{n:5d}   {e:22.6e}   {r:12.6g}" for n, e, r in results]
    (out_dir / "demo_summary.txt").write_text("\n".join(text) + "\n")
    print("\n".join(text))
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors, which this tool reserves
    # for simulation-quality failures; route usage errors to status 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(1)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--hbar", type=float, default=1.0, help="Planck constant (default 1)")
    p.add_argument("--mass", type=float, default=1.0, help="particle mass (default 1)")
    p.add_argument("--out", default="out", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hydrec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a synthetic measured dataset")
    _add_common(p)
    p.add_argument("--state", choices=("cat", "gaussian", "coherent"), default="cat")
    p.add_argument("--grid", default="-10,10,1024", help="xmin,xmax,n")
    p.add_argument("--times", default="0,0.005,4", help="t0,dt,m (m+1 nodes)")
    p.add_argument("--potential", default="free", help="kind:key=value,... e.g. harmonic:omega=1")
    p.add_argument("--sigma", type=float, default=CAT_DEFAULTS.sigma)
    p.add_argument("--k0", type=float, default=CAT_DEFAULTS.k0)
    p.add_argument("--center", type=float, default=0.0)
    p.add_argument("--momentum", type=float, default=0.0)
    p.add_argument("--noise", type=float, default=0.0, help="additive Gaussian noise on f0")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--substeps", type=int, default=None, help="internal steps per node interval")
    p.add_argument("--store-psi", action="store_true", help="also store wavefunctions")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("reconstruct", help="recursive moments from a dataset")
    _add_common(p)
    p.add_argument("dataset", help="path to dataset.json")
    p.add_argument("--order", type=int, required=True, help="highest moment order N")
    p.add_argument("--smooth", default="", help="window,degree local-polynomial smoothing of f0")
    p.add_argument("--node", type=int, default=None, help="report node (default: central)")
    p.set_defaults(func=cmd_reconstruct)

    for verb, with_ref in (("assemble", False), ("compare", True)):
        p = sub.add_parser(
            verb,
            help="assemble the density-matrix Taylor polynomial"
            + (" and compare against a reference" if with_ref else ""),
        )
        _add_common(p)
        p.add_argument("moments", help="path to moments.json")
        p.add_argument("--y-max", type=float, default=1.5)
        p.add_argument("--n-y", type=int, default=201)
        if with_ref:
            p.add_argument("--reference", choices=("analytic-cat", "stored-psi"), required=True)
            p.add_argument("--dataset", default="", help="dataset manifest for stored-psi")
            p.add_argument("--ref-sigma", type=float, default=CAT_DEFAULTS.sigma)
            p.add_argument("--ref-k0", type=float, default=CAT_DEFAULTS.k0)
            p.add_argument("--region-x", type=float, default=3.0)
            p.add_argument("--region-y", type=float, default=1.5)
        p.set_defaults(func=lambda a, w=with_ref: cmd_assemble_compare(a, w))

    p = sub.add_parser("demo-cat", help="multi-order reconstruction of the default cat state")
    _add_common(p)
    p.add_argument("--orders", default="10,20,36", help="comma-separated Taylor orders")
    p.add_argument("--grid", default="-6,6,481", help="xmin,xmax,n")
    p.add_argument("--y-max", type=float, default=1.5)
    p.add_argument("--n-y", type=int, default=201)
    p.set_defaults(func=cmd_demo_cat)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    except SimulationQualityError as exc:
        print(f"hydrec: simulation quality failure: {exc}", file=sys.stderr)
        return 2
    except InsufficientTimeSamplesError as exc:
        print(f"hydrec: {exc}", file=sys.stderr)
        return 3
    except MissingReferenceError as exc:
        print(f"hydrec: missing reference: {exc}", file=sys.stderr)
        return 4
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"hydrec: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
