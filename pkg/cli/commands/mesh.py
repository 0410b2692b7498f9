"""Mesh commands: gen, extend, check and render."""
import json
import logging
import random
from collections import Counter
from pathlib import Path

from cli.commands import CommandResult
from cli.meshfile import (
    document_format,
    parse_mesh,
    parse_spec,
    parse_vectors,
    read_mesh,
    read_vectors,
    serialize_mesh,
)
from cli.models import VECTORS_FORMAT
from cli.svg import render_svg
from tmesh_spline.config import spline_config
from tmesh_spline.errors import MeshSemanticError, NotInClassError
from tmesh_spline.mesh import (
    Rect,
    TMesh,
    extend,
    format_address,
    generate,
    isolated_counts,
    random_hierspec,
    vertex_census,
)
from tmesh_spline.mesh.hierarchy import HierSpec
from tmesh_spline.spline import order_ledges

logger = logging.getLogger(__name__)


def _mesh_summary(mesh: TMesh) -> dict:
    return {
        "vertices": len(mesh.vertices),
        "cells": len(mesh.cells),
        "ledges": len(mesh.ledges),
        "vertex_census": vertex_census(mesh)._asdict(),
        "x_lines": len(mesh.x_lines),
        "y_lines": len(mesh.y_lines),
    }


def _rng(args) -> random.Random:
    seed = args.seed if getattr(args, "seed", None) is not None else spline_config.random_seed
    return random.Random(seed)


def _spec_from_args(args) -> HierSpec:
    if args.spec:
        return parse_spec(Path(args.spec).read_text(encoding="utf-8"))
    if args.random is not None:
        return random_hierspec(
            random.Random(args.random), args.m, args.n, max_p=args.p or 8, max_q=args.q or 8, max_levels=args.levels
        )
    if args.p is None or args.q is None:
        raise MeshSemanticError("gen needs --spec, --random, or both --p and --q")
    payload = {"m": args.m, "n": args.n, "p": args.p, "q": args.q, "script": [lvl.split() for lvl in args.level]}
    return parse_spec(json.dumps(payload))


def run_gen(args) -> CommandResult:
    spec = _spec_from_args(args)
    hm = generate(spec)
    delta, per_level = isolated_counts(hm.forest)
    regions = {}
    for level in range(len(hm.forest.levels)):
        for sub in hm.forest.subdivided(level):
            grid = hm.forest.region_grid(sub.address)
            regions[format_address(sub.address)] = [len(grid.xs) - 1, len(grid.ys) - 1]
    report = {
        "status": "ok",
        "m": spec.m,
        "n": spec.n,
        **_mesh_summary(hm.mesh),
        "refinement_depth": hm.forest.refinement_depth,
        "regions": regions,
        "delta": delta,
        "delta_per_level": per_level,
    }
    summary = (
        f"gen: T_{{{spec.m},{spec.n}}} mesh with {len(hm.mesh.cells)} cells, "
        f"{hm.forest.refinement_depth} refinement levels, delta={delta}"
    )
    pairing = args.pairing or spline_config.extension_pairing
    return CommandResult(0, report, summary, serialize_mesh(hm, pairing=pairing))


def run_extend(args) -> CommandResult:
    loaded = read_mesh(args.mesh)
    pairing = args.pairing or loaded.pairing
    extended = extend(loaded.tmesh, loaded.m, loaded.n, pairing=pairing, spacing=args.spacing, rng=_rng(args))
    report = {
        "status": "ok",
        "pairing": pairing,
        **_mesh_summary(extended),
        "provenance": dict(sorted(Counter(e.provenance for e in extended.ledges).items())),
    }
    summary = f"extend: {len(extended.x_lines)} x {len(extended.y_lines)} line coordinates, {len(extended.cells)} cells"
    return CommandResult(0, report, summary, serialize_mesh(extended, loaded.m, loaded.n, pairing))


def run_check(args) -> CommandResult:
    text = Path(args.document).read_text(encoding="utf-8")
    if document_format(text) == VECTORS_FORMAT:
        loaded = parse_vectors(text)
        failing = [label for label, cv in zip(loaded.labels, loaded.vectors) if not cv.is_conformal()]
        report = {
            "status": "failed" if failing else "ok",
            "kind": "vectors",
            "vectors": len(loaded.vectors),
            "nonconformal": failing,
        }
        summary = f"check: {len(loaded.vectors) - len(failing)}/{len(loaded.vectors)} vectors conformal"
        return CommandResult(1 if failing else 0, report, summary)
    loaded = parse_mesh(text)
    report = {"status": "ok", "kind": "mesh", "regular": True, "hierarchical": loaded.hierarchical is not None}
    report.update(_mesh_summary(loaded.tmesh))
    summary = f"check: regular T-mesh, {len(loaded.tmesh.cells)} cells, {len(loaded.tmesh.ledges)} l-edges"
    return CommandResult(0, report, summary)


def _support_box(cv) -> Rect:
    points = cv.by_point()
    xs = [x for x, _ in points]
    ys = [y for _, y in points]
    return Rect(min(xs), max(xs), min(ys), max(ys))


def run_render(args) -> CommandResult:
    loaded = read_mesh(args.mesh)
    mesh = loaded.tmesh
    labels = None
    if args.extended or args.order_labels:
        mesh = extend(mesh, loaded.m, loaded.n, pairing=args.pairing or loaded.pairing, spacing=args.spacing, rng=_rng(args))
    if args.order_labels:
        if loaded.hierarchical is None:
            raise NotInClassError("order labels need a mesh generated from a refinement script")
        ordered = order_ledges(mesh, loaded.hierarchical.forest, loaded.m, loaded.n)
        labels = {step.key: str(i + 1) for i, step in enumerate(ordered.steps)}
    highlights = []
    if args.vectors:
        vectors = read_vectors(args.vectors).vectors
        chosen = args.highlight if args.highlight else range(len(vectors))
        if any(not 0 <= i < len(vectors) for i in chosen):
            raise MeshSemanticError(f"highlight indices must lie in 0..{len(vectors) - 1}")
        highlights = [_support_box(vectors[i]) for i in chosen if not vectors[i].is_zero]
    svg = render_svg(mesh, by_level=not args.no_levels, labels=labels, highlights=highlights)
    report = {"status": "ok", "ledges": len(mesh.ledges), "highlights": len(highlights), "labels": len(labels or {})}
    return CommandResult(0, report, f"render: {len(mesh.ledges)} l-edges", svg)
