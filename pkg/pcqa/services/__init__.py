"""Services for the pcqa toolkit."""

from pcqa.services.ply_io import read_cloud, write_cloud
from pcqa.services.point_metrics import point_metric_rows
from pcqa.services.preprocess import normalize_to_box, quantize_and_dedup
from pcqa.services.view_pooling import projection_pcqa

__all__ = [
    "normalize_to_box",
    "point_metric_rows",
    "projection_pcqa",
    "quantize_and_dedup",
    "read_cloud",
    "write_cloud",
]
