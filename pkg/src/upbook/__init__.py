"""Upward two-page book embeddings of partitioned digraphs."""
