"""
Models package
Exports all pydantic models
"""

from .base import LabModel
from .bessel import BesselEvaluation, BesselRegime, RegimeTag
from .form import HeckeTable, MaassForm, Point
from .nodal import NodalLocus, NodalReport, SignGrid
from .norms import HorocycleParseval, NormResult, QuadratureResult, RangeLabel, RangePiece
from .oscillation import (
    CertificationReport, ConstantsProfile, LittlewoodCertificate, PhaseQuadruple, SegmentKind, SelectedWindow,
    SignCount, WindowSelection,
)
from .run import OutputFormat, RunConfig
from .solver import SolverConfig, SolverResult

__all__ = [
    'LabModel',
    'BesselEvaluation', 'BesselRegime', 'RegimeTag',
    'HeckeTable', 'MaassForm', 'Point',
    'NodalLocus', 'NodalReport', 'SignGrid',
    'HorocycleParseval', 'NormResult', 'QuadratureResult', 'RangeLabel', 'RangePiece',
    'CertificationReport', 'ConstantsProfile', 'LittlewoodCertificate', 'PhaseQuadruple', 'SegmentKind',
    'SelectedWindow', 'SignCount', 'WindowSelection',
    'OutputFormat', 'RunConfig',
    'SolverConfig', 'SolverResult',
]
