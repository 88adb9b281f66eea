from .file_export import FileExporter
from .matrix_io import read_matrix, write_matrix, file_digest

__all__ = ["FileExporter", "read_matrix", "write_matrix", "file_digest"]
