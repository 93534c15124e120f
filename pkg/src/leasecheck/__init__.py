"""Rule-based landlord-tenant compliance analysis for New York tenancy
questions: a stratified rule engine over an embedded legal knowledge
base, case-fact extraction from narrative text, a guided interview
flow, and CLI/HTTP front ends."""

__version__ = "0.1.0"
