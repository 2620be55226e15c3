from .barcode import (
    Barcode,
    CalibrationError,
    IncomparableDiagramsError,
    PersistencePair,
    calibrate,
    cloud_persistence,
    reference_torus_barcode,
    topology_score,
    vr_persistence,
    wasserstein,
)
from .rips import InvalidMetricError, enclosing_radius

__all__ = [
    "Barcode", "CalibrationError", "IncomparableDiagramsError", "InvalidMetricError",
    "PersistencePair", "calibrate", "cloud_persistence", "enclosing_radius",
    "reference_torus_barcode", "topology_score", "vr_persistence", "wasserstein",
]
