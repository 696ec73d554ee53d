"""
QuotaMatch test suite. Runs clean under pytest -W error.
"""
