"""Published per-geometry reference values used as test oracles.

Columns: coordination number k, distinct bond angle count m, one-particle
coefficient E (3 decimals), typicality tau, sphericity psi, moment of inertia
per neighbour I/k (2 decimals).
"""

TABLE = {
    # code: (k, m, E, tau, psi, ik)
    "TBP": (5, 3, 1.737, -1.0880, 0.7563, 1.14),
    "SDS": (8, 6, 2.222, -1.0392, 0.8543, 1.31),
    "PBP": (7, 4, 2.392, -0.7239, 0.8696, 1.00),
    "CTP": (7, 4, 2.392, -0.9770, 0.8025, 1.33),
    "BTP": (8, 5, 2.485, -0.8325, 0.8630, 1.19),
    "TET": (4, 1, 2.585, -1.3589, 0.6711, 1.00),
    "HBP": (8, 4, 2.807, -0.3556, 0.8630, 1.00),
    "CSA": (9, 5, 2.848, -0.5778, 0.8778, 1.24),
    "CSP": (9, 5, 2.848, -0.6698, 0.8272, 1.28),
    "TTP": (9, 5, 2.848, -0.6901, 0.9062, 1.00),
    "SC": (6, 2, 2.907, -0.7558, 0.8456, 1.00),
    "BSA": (10, 6, 2.907, -0.4588, 0.8853, 1.18),
    "BSP": (10, 5, 3.170, -0.6972, 0.8579, 1.07),
    "CPP": (11, 6, 3.196, -0.5918, 0.8695, 1.20),
    "SA": (8, 3, 3.222, -0.6928, 0.8595, 1.00),
    "HDR": (8, 3, 3.222, -0.6609, 0.8060, 1.00),
    "BPP": (12, 7, 3.237, -0.5326, 0.9095, 1.00),
    "HCP": (12, 6, 3.459, -0.5377, 0.9050, 1.00),
    "BCC": (14, 6, 3.923, -0.9754, 0.9047, 1.14),
    "FCC": (12, 4, 4.044, -0.8574, 0.9050, 1.00),
    "CPA": (11, 3, 4.196, -1.0148, 0.8967, 1.20),
    "ICO": (12, 3, 4.459, -1.1625, 0.9393, 1.00),
}

# class: (psi, ik, tau)
CLASS_AVERAGES = {
    "spheroidal": (0.90, 1.09, -0.74),
    "ellipsoidal": (0.84, 1.28, -0.95),
    "bipyramidal": (0.83, 1.04, -0.75),
    "cuboidal": (0.85, 1.12, -0.73),
    "tetrahedral": (0.67, 1.00, -1.36),
}

# geometries retained as pool sources: no other catalog entry caps them
# (derived once from the capping relation and frozen)
CAPPING_REDUCED = [
    "TBP", "SDS", "PBP", "TET", "HBP", "TTP", "SC", "BSA", "BSP", "BPP",
    "HCP", "BCC", "FCC", "ICO",
]
