"""Serving surface: CLI subcommands, HTTP API, configuration, and the
durable interview session store."""
