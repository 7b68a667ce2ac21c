#!/usr/bin/env python3
"""Closed-form rate allocation: square-root proportional shares, tight
budget, and the latency anchors of the fixed-CR baselines.
"""

import numpy as np

from semalloc.rates import allocate_rates, latency_term

R = 400e6
B = 64
DIMS = [786432] * 4

print("heterogeneous CRs share the 400 Mb/s budget by sqrt(load):")
eps = [0.05, 0.10, 0.20, 0.30]
alloc = allocate_rates(eps, DIMS, R, bits_per_symbol=B)
for i, (e, r, lat) in enumerate(zip(eps, alloc.rates, alloc.latencies), start=1):
    print(f"  user {i}: cr {e:.2f} -> rate {r / 1e6:7.2f} Mb/s, latency {lat * 1e3:6.2f} ms")
print(f"  budget used: {sum(alloc.rates) / 1e6:.6f} Mb/s (tight)")
print(f"  average latency: {alloc.avg_latency * 1e3:.2f} ms")

print("\nfixed-CR anchors (4 users, 3x512x512 frames, B = 64):")
for label, e in (("max CR 3/10", 0.3), ("min CR 1/30", 1 / 30)):
    a = allocate_rates([e] * 4, DIMS, R, bits_per_symbol=B)
    print(f"  {label}: {a.avg_latency * 1e3:7.2f} ms per user")

print("\nobjective latency penalty (alpha = 200) equals alpha times the")
print("average latency computed from the optimal rates:")
pen = latency_term(eps, DIMS, R, B, 4, 200.0)
cont = B * np.array(eps) * np.array(DIMS) / np.array(alloc.rates)
print(f"  latency_term: {pen:.4f}   alpha * mean(T): {200.0 * cont.mean():.4f}")
