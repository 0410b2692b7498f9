"""Configuration management for the T-mesh spline toolkit.

This module defines configuration dataclasses for different aspects of the system:
- SplineConfiguration: extension layout, conformality checking and l-edge ordering
- OracleConfiguration: exact linear-algebra oracles
- RenderConfiguration: SVG output

Explicit function arguments always take precedence over these values.
"""

import os
from dataclasses import dataclass, field
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


def _env_flag(name: str, default: str) -> bool:
    return os.getenv(name, default).strip().lower() in ("1", "true", "yes", "on")


@dataclass
class SplineConfiguration:
    """Configuration for mesh extension, spline evaluation and basis ordering.

    Attributes:
        extension_pairing: "algebraic" copies vertical boundary lines m times and
            horizontal ones n times; "literal" swaps the two counts
        copy_spacing: "min-cell" places boundary copies at the smallest cell side,
            "random" draws rational offsets from a seeded generator
        check_conformality: verify membership in W before evaluating a spline
        tie_break: "least" or "greatest" choice among eligible l-edges
        random_seed: seed for random copy placement and random mesh generation
    """
    extension_pairing: str = os.getenv("TMESH_EXTENSION_PAIRING", "algebraic")
    copy_spacing: str = os.getenv("TMESH_COPY_SPACING", "min-cell")
    check_conformality: bool = _env_flag("TMESH_CHECK_CONFORMALITY", "true")
    tie_break: str = os.getenv("TMESH_TIE_BREAK", "least")
    random_seed: int = int(os.getenv("TMESH_RANDOM_SEED", "0"))


@dataclass
class OracleConfiguration:
    """Configuration for the exact rank oracles.

    Attributes:
        shifted_moments: assemble moment rows in shifted monomials (t - t0)^j
        cellwise_cell_limit: largest cell count the CLI runs the cellwise oracle on
            without --force
    """
    shifted_moments: bool = _env_flag("TMESH_SHIFTED_MOMENTS", "false")
    cellwise_cell_limit: int = int(os.getenv("TMESH_CELLWISE_CELL_LIMIT", "400"))


@dataclass
class RenderConfiguration:
    """Configuration for SVG rendering.

    Attributes:
        scale: user units per unit of mesh coordinate
        margin: blank border around the drawing
        stroke_width: line width for mesh edges
        level_colors: stroke colors by l-edge level, cycled when levels exceed the list
    """
    scale: int = int(os.getenv("TMESH_SVG_SCALE", "60"))
    margin: int = int(os.getenv("TMESH_SVG_MARGIN", "20"))
    stroke_width: int = int(os.getenv("TMESH_SVG_STROKE", "2"))
    level_colors: list = field(
        default_factory=lambda: [
            c.strip()
            for c in os.getenv("TMESH_SVG_LEVEL_COLORS", "#1f2937,#2563eb,#dc2626,#16a34a").split(",")
            if c.strip()
        ]
    )


# Global configuration instances
spline_config = SplineConfiguration()
oracle_config = OracleConfiguration()
render_config = RenderConfiguration()
