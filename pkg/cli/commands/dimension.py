"""The dim command: closed form and exact oracles on one mesh document."""
import logging
import random
from dataclasses import asdict

from cli.commands import CommandResult
from cli.meshfile import read_mesh
from cli.models import CensusModel, DimensionReportModel
from tmesh_spline.config import oracle_config, spline_config
from tmesh_spline.spline import PATHS, dim_spline_space

logger = logging.getLogger(__name__)


def _paths(args) -> list[str]:
    if args.formula_only:
        return ["formula"]
    if args.oracle_only:
        return ["conformality", "cellwise"]
    return list(PATHS)


def run_dim(args) -> CommandResult:
    loaded = read_mesh(args.mesh)
    paths = _paths(args)
    skipped = []
    cells = len(loaded.tmesh.cells)
    if "cellwise" in paths and cells > oracle_config.cellwise_cell_limit and not args.force:
        logger.warning(f"Skipping the cellwise oracle on {cells} cells (limit {oracle_config.cellwise_cell_limit})")
        paths.remove("cellwise")
        skipped.append("cellwise")

    seed = args.seed if args.seed is not None else spline_config.random_seed
    report = dim_spline_space(
        loaded.mesh,
        loaded.m,
        loaded.n,
        pairing=args.extension_pairing or loaded.pairing,
        spacing=args.spacing,
        rng=random.Random(seed),
        paths=paths,
        with_ledger=args.ledger,
    )
    model = DimensionReportModel(
        status="ok" if report.agreement else "disagreement",
        m=report.m,
        n=report.n,
        pairing=report.pairing,
        census=CensusModel(**{**asdict(report.census), "delta_per_level": list(report.census.delta_per_level)})
        if report.census
        else None,
        formula=report.formula,
        conformality=report.conformality,
        cellwise=report.cellwise,
        formula_error=report.formula_error,
        skipped=skipped,
        agreement=report.agreement,
        timings={name: f"{seconds:.6f}" for name, seconds in report.timings.items()},
        ledger=report.ledger,
    )
    values = " ".join(f"{name}={value}" for name, value in report.values.items())
    summary = f"dim: {values} ({'agree' if report.agreement else 'DISAGREE'})"
    return CommandResult(0 if report.agreement else 1, model.model_dump(mode="json", exclude_none=True), summary)
