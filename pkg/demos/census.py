"""Classify every structure-constant table in dimension 3 over F3."""

import time

from nilmodels import enumerate_dim3_f3

t0 = time.perf_counter()
census = enumerate_dim3_f3()
print(f"{census.tables} tables, {census.rejected} rejected (Jacobi or nilpotency)")
for label, n in sorted(census.counts.items()):
    print(f"  {label}: {n}")
print(f"fingerprint mismatches: {len(census.mismatches)}  ({time.perf_counter() - t0:.1f}s)")
