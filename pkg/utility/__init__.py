"""
Utility Package for Run Artifacts
"""
from .run_summary import RunSummary, read_summary, write_summary
from .trace_io import (
    read_params_csv,
    read_trace_csv,
    write_learning_curve,
    write_params_csv,
    write_table,
    write_trace_csv,
)

__all__ = [
    'RunSummary',
    'read_summary',
    'write_summary',
    'read_trace_csv',
    'write_trace_csv',
    'read_params_csv',
    'write_params_csv',
    'write_learning_curve',
    'write_table',
]

__version__ = '1.0.0'
