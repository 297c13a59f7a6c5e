"""Event narrative construction from news: extraction, graph, retrieval, reports."""

__version__ = "0.1.0"
