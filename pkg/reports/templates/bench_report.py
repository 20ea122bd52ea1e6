"""
Benchmark sweep report template.
"""

from typing import List, Optional, Sequence

import matplotlib.figure

from ..curves import summarize_runs
from ..event_log import RunRecord
from ..pdf_generator import BenchReportGenerator


class BenchReportTemplate:
    """Summary table plus convergence plots for one event log."""

    def __init__(self):
        self.generator = BenchReportGenerator()

    def create_report(self,
                      output_path: str,
                      records: Sequence[RunRecord],
                      plot_figures: List[matplotlib.figure.Figure],
                      event_log: str = '',
                      custom_title: Optional[str] = None) -> bool:
        maps = sorted({r.map for r in records})
        report_info = {
            'custom_title': custom_title,
            'maps': ', '.join(maps) if maps else 'None',
            'run_count': len(records),
            'event_log': event_log,
        }
        return self.generator.generate_report(
            output_path=output_path,
            summary=summarize_runs(records),
            plot_figures=plot_figures,
            report_info=report_info
        )
