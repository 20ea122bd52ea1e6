"""
PDF summary of a benchmark sweep: header, per-configuration table and convergence plots.
"""

import io
import logging
import traceback
from datetime import datetime
from typing import Any, Dict, List

import matplotlib.figure
import pandas as pd
from reportlab.lib import colors
from reportlab.lib.pagesizes import landscape, letter
from reportlab.lib.styles import ParagraphStyle, getSampleStyleSheet
from reportlab.lib.units import inch
from reportlab.platypus import (Image, PageBreak, Paragraph, SimpleDocTemplate, Spacer,
                                Table, TableStyle)

from config.constants import REPORT_MARGIN

logger = logging.getLogger(__name__)

_SUMMARY_HEADERS = [
    ('algo', 'Algorithm'),
    ('params', 'Parameters'),
    ('agents', 'Agents'),
    ('runs', 'Runs'),
    ('success_rate', 'Solved'),
    ('median_first_ms', 'First sol. (ms)'),
    ('mean_final_bound', 'Final bound'),
    ('optimal_fraction', 'Optimal'),
]


class BenchReportGenerator:
    """Generates landscape PDF reports for benchmark sweeps."""

    def __init__(self):
        self.styles = getSampleStyleSheet()
        self._setup_custom_styles()

    def _setup_custom_styles(self):
        self.styles.add(ParagraphStyle(
            name='CustomTitle',
            parent=self.styles['Title'],
            fontSize=18,
            textColor=colors.darkblue,
            spaceAfter=20,
            alignment=1
        ))
        self.styles.add(ParagraphStyle(
            name='Subtitle',
            parent=self.styles['Heading2'],
            fontSize=14,
            textColor=colors.darkblue,
            spaceBefore=15,
            spaceAfter=10
        ))
        self.styles.add(ParagraphStyle(
            name='TableText',
            parent=self.styles['Normal'],
            fontSize=8,
            fontName='Courier'
        ))

    def generate_report(self, output_path: str, summary: pd.DataFrame,
                        plot_figures: List[matplotlib.figure.Figure],
                        report_info: Dict[str, Any]) -> bool:
        """
        Build the PDF.

        Args:
            output_path: where the PDF is written
            summary: per-configuration table from ``summarize_runs``
            plot_figures: convergence figures, laid out four per page
            report_info: title, map and run count for the header

        Returns:
            bool: True if the PDF was written
        """
        try:
            doc = SimpleDocTemplate(
                output_path,
                pagesize=landscape(letter),
                rightMargin=REPORT_MARGIN,
                leftMargin=REPORT_MARGIN,
                topMargin=REPORT_MARGIN,
                bottomMargin=REPORT_MARGIN
            )
            story = []
            story.extend(self._create_header(report_info))
            story.extend(self._create_summary_table(summary))
            if plot_figures:
                story.append(PageBreak())
                story.extend(self._create_multi_plot_pages(plot_figures))
            doc.build(story)
            logger.info(f"PDF report generated with {len(plot_figures)} plots: {output_path}")
            return True
        except Exception as e:
            logger.error(f"Failed to generate PDF report: {e}")
            logger.debug(f"Full traceback:\n{traceback.format_exc()}")
            return False

    def _create_header(self, report_info: Dict[str, Any]) -> list:
        elements = []
        title_text = report_info.get('custom_title') or 'Anytime MAPF Benchmark Report'
        elements.append(Paragraph(title_text, self.styles['CustomTitle']))
        elements.append(Spacer(1, 12))

        metadata = [
            ['Report Generated:', datetime.now().strftime("%Y-%m-%d %H:%M:%S")],
            ['Maps:', report_info.get('maps', 'Not specified')],
            ['Runs:', str(report_info.get('run_count', 0))],
            ['Event Log:', report_info.get('event_log', '')],
        ]
        metadata_table = Table(metadata, colWidths=[2 * inch, 6 * inch])
        metadata_table.setStyle(TableStyle([
            ('BACKGROUND', (0, 0), (0, -1), colors.lightgrey),
            ('TEXTCOLOR', (0, 0), (-1, -1), colors.black),
            ('ALIGN', (0, 0), (-1, -1), 'LEFT'),
            ('FONTNAME', (0, 0), (0, -1), 'Helvetica-Bold'),
            ('FONTSIZE', (0, 0), (-1, -1), 10),
            ('GRID', (0, 0), (-1, -1), 1, colors.black),
            ('VALIGN', (0, 0), (-1, -1), 'TOP'),
        ]))
        elements.append(metadata_table)
        elements.append(Spacer(1, 20))
        return elements

    @staticmethod
    def _format_cell(column: str, value) -> str:
        if pd.isna(value):
            return '-'
        if column in ('success_rate', 'optimal_fraction'):
            return f"{value * 100:.0f}%"
        if column == 'mean_final_bound':
            return f"{value:.3f}"
        if column == 'median_first_ms':
            return f"{value:.0f}"
        return str(value)

    def _create_summary_table(self, summary: pd.DataFrame) -> list:
        elements = [Paragraph('Configuration Summary', self.styles['Subtitle'])]
        if summary.empty:
            elements.append(Paragraph('No runs recorded.', self.styles['Normal']))
            return elements

        rows = [[header for _, header in _SUMMARY_HEADERS]]
        for _, row in summary.iterrows():
            rows.append([Paragraph(self._format_cell(col, row[col]), self.styles['TableText'])
                         for col, _ in _SUMMARY_HEADERS])
        table = Table(rows, repeatRows=1,
                      colWidths=[0.8 * inch, 2.8 * inch] + [0.8 * inch] * 6)
        table.setStyle(TableStyle([
            ('BACKGROUND', (0, 0), (-1, 0), colors.lightgrey),
            ('FONTNAME', (0, 0), (-1, 0), 'Helvetica-Bold'),
            ('FONTSIZE', (0, 0), (-1, -1), 8),
            ('GRID', (0, 0), (-1, -1), 0.5, colors.black),
            ('VALIGN', (0, 0), (-1, -1), 'MIDDLE'),
        ]))
        elements.append(table)
        return elements

    def _create_multi_plot_pages(self, plot_figures: List[matplotlib.figure.Figure]) -> list:
        story = []
        for chunk_start in range(0, len(plot_figures), 4):
            story.extend(self._create_plot_grid(plot_figures[chunk_start:chunk_start + 4]))
            if chunk_start + 4 < len(plot_figures):
                story.append(PageBreak())
        return story

    def _create_plot_grid(self, figures: List[matplotlib.figure.Figure]) -> list:
        """2x2 grid of plots for one landscape page."""
        images = [img for img in (self._figure_to_image(fig) for fig in figures) if img]
        while len(images) < 4:
            images.append(Spacer(1, 1))

        # usable area after margins is 720 x 540 points
        plot_table = Table([[images[0], images[1]], [images[2], images[3]]],
                           colWidths=[360, 360], rowHeights=[250, 250])
        plot_table.setStyle(TableStyle([
            ('ALIGN', (0, 0), (-1, -1), 'CENTER'),
            ('VALIGN', (0, 0), (-1, -1), 'MIDDLE'),
            ('LEFTPADDING', (0, 0), (-1, -1), 5),
            ('RIGHTPADDING', (0, 0), (-1, -1), 5),
            ('TOPPADDING', (0, 0), (-1, -1), 5),
            ('BOTTOMPADDING', (0, 0), (-1, -1), 5),
        ]))
        return [plot_table]

    def _figure_to_image(self, fig: matplotlib.figure.Figure,
                         width: float = 4.5 * inch, height: float = 3.2 * inch):
        try:
            buffer = io.BytesIO()
            fig.savefig(buffer, format='png', dpi=150, bbox_inches='tight')
            buffer.seek(0)
            return Image(buffer, width=width, height=height)
        except Exception as e:
            logger.error(f"Failed to convert figure to image: {e}")
            return None
