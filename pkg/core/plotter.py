"""
Convergence plots: proven suboptimality bound over time, one line per algorithm version.
"""

import io
import logging
from typing import Iterable, List, Optional, Sequence

# Agg must be selected before pyplot is imported
import matplotlib
matplotlib.use('Agg')
import matplotlib.figure
import matplotlib.pyplot as plt
import numpy as np

from config.constants import EXPORT_DPI, PLOT_COLORS, PLOT_DPI, PLOT_HEIGHT, PLOT_WIDTH
from reports.curves import Curve
from reports.event_log import RunRecord

logger = logging.getLogger(__name__)

# fixed ids and no timestamp keep SVG output byte-stable
_SVG_RC = {
    'svg.hashsalt': 'convergence-plot',
    'svg.fonttype': 'none',
}


class ConvergencePlotter:
    """Builds bound-over-time figures and renders them to SVG or PNG."""

    def __init__(self):
        self.figure: Optional[matplotlib.figure.Figure] = None
        self.ax = None

    def _new_figure(self) -> None:
        if self.figure is not None:
            plt.close(self.figure)
        self.figure = plt.figure(figsize=(PLOT_WIDTH, PLOT_HEIGHT), dpi=PLOT_DPI)
        self.ax = self.figure.add_subplot(111)

    def create_convergence_plot(self, curves: Sequence[Curve],
                                labels: Optional[Sequence[str]] = None,
                                title: Optional[str] = None,
                                xlabel: str = 'Time since first solution (s)',
                                ylabel: str = 'Suboptimality bound') -> matplotlib.figure.Figure:
        """
        One step line per non-empty curve. ``labels`` defaults to each curve's
        own label; empty curves are listed in the legend without a line.
        """
        if not curves:
            raise ValueError("at least one curve is required")
        labels = list(labels) if labels is not None else [c.label for c in curves]
        if len(labels) != len(curves):
            raise ValueError(f"{len(labels)} labels for {len(curves)} curves")

        self._new_figure()
        for i, (curve, label) in enumerate(zip(curves, labels)):
            color = PLOT_COLORS[i % len(PLOT_COLORS)]
            if curve.is_empty:
                line, = self.ax.plot([], [], color=color, label=f"{label} (no solution)")
            else:
                line, = self.ax.plot(curve.times() / 1000.0, curve.values(), color=color,
                                     drawstyle='steps-post', linewidth=1.5,
                                     label=f"{label} (n={curve.n_scenarios})")
            line.set_gid(f"curve-{i}")

        self.ax.set_xlabel(xlabel)
        self.ax.set_ylabel(ylabel)
        if title is None:
            first = curves[0]
            title = f"{first.map}, {first.agents} agents"
        self.ax.set_title(title)
        self.ax.grid(True, alpha=0.3)
        self.ax.legend(loc='upper right')
        self.figure.tight_layout()
        logger.debug(f"Created convergence plot with {len(curves)} curves")
        return self.figure

    def create_trace_plot(self, records: Sequence[RunRecord],
                          labels: Optional[Sequence[str]] = None) -> matplotlib.figure.Figure:
        """Bound over absolute run time for individual runs."""
        if not records:
            raise ValueError("at least one run is required")
        labels = list(labels) if labels is not None else [r.algo for r in records]

        self._new_figure()
        for i, (record, label) in enumerate(zip(records, labels)):
            color = PLOT_COLORS[i % len(PLOT_COLORS)]
            t = np.array([e.t_ms for e in record.events], dtype=float) / 1000.0
            bounds = np.array([e.epsilon_bound for e in record.events], dtype=float)
            if t.size:
                # hold the last bound until the run ended
                t = np.append(t, max(record.wall_ms / 1000.0, t[-1]))
                bounds = np.append(bounds, bounds[-1])
            line, = self.ax.plot(t, bounds, color=color, drawstyle='steps-post',
                                 marker='o', markersize=3, label=label)
            line.set_gid(f"trace-{i}")

        first = records[0]
        self.ax.set_xlabel('Run time (s)')
        self.ax.set_ylabel('Suboptimality bound')
        self.ax.set_title(f"{first.map}, scenario {first.scen}, {first.agents} agents")
        self.ax.grid(True, alpha=0.3)
        self.ax.legend(loc='upper right')
        self.figure.tight_layout()
        return self.figure

    def to_svg(self, figure: Optional[matplotlib.figure.Figure] = None) -> str:
        figure = figure or self.figure
        if figure is None:
            raise ValueError("no figure to render")
        buffer = io.StringIO()
        with matplotlib.rc_context(_SVG_RC):
            figure.savefig(buffer, format='svg', metadata={'Date': None})
        return buffer.getvalue()

    def save_plot(self, filename: str, dpi: int = EXPORT_DPI) -> bool:
        """Save the current figure; the format follows the file extension."""
        if self.figure is None:
            logger.error("No plot to save")
            return False
        try:
            if filename.lower().endswith('.svg'):
                with open(filename, 'w', encoding='utf-8') as f:
                    f.write(self.to_svg())
            else:
                self.figure.savefig(filename, dpi=dpi, bbox_inches='tight')
            logger.info(f"Plot saved to {filename}")
            return True
        except OSError as e:
            logger.error(f"Error saving plot: {e}")
            return False

    def close(self) -> None:
        if self.figure is not None:
            plt.close(self.figure)
            self.figure = None
            self.ax = None


def render_svg(curves: Sequence[Curve], labels: Optional[Sequence[str]] = None,
               xlabel: str = 'Time since first solution (s)',
               ylabel: str = 'Suboptimality bound') -> str:
    """Standalone SVG document for the given curves; identical input gives identical text."""
    plotter = ConvergencePlotter()
    try:
        plotter.create_convergence_plot(curves, labels, xlabel=xlabel, ylabel=ylabel)
        return plotter.to_svg()
    finally:
        plotter.close()


def render_trace_svg(records: Sequence[RunRecord], labels: Optional[Sequence[str]] = None) -> str:
    plotter = ConvergencePlotter()
    try:
        plotter.create_trace_plot(records, labels)
        return plotter.to_svg()
    finally:
        plotter.close()


def convergence_figures(curves: Iterable[Curve]) -> List[matplotlib.figure.Figure]:
    """One figure per (map, agents) group, for the PDF summary. Caller closes them."""
    groups = {}
    for curve in curves:
        groups.setdefault((curve.map, curve.agents), []).append(curve)
    figures = []
    for key in sorted(groups):
        plotter = ConvergencePlotter()
        figures.append(plotter.create_convergence_plot(groups[key]))
    return figures
