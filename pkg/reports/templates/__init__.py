"""
Report templates built on the PDF generator.
"""

from .bench_report import BenchReportTemplate

__all__ = ['BenchReportTemplate']
