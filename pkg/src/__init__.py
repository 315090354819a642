"""Main source package."""

# This package contains the core modules for the ATCH hypergraph store
