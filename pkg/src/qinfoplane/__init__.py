"""Information-plane probes and compression-gnostic training for
re-uploading quantum circuits."""

__version__ = "0.1.0"
