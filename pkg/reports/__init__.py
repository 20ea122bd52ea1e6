"""
Event logs, curve aggregation and PDF reporting for benchmark runs.
"""

from .pdf_generator import BenchReportGenerator
from .templates import BenchReportTemplate

__all__ = ['BenchReportGenerator', 'BenchReportTemplate']
