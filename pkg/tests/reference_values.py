"""
Benchmark values for the four three-class scenarios and the
18-class municipal fleet portfolio (psi = 0.8 and 0.782, -1/+2 rule, z = 10).

Frozen as printed, to three or four decimals; tests compare with tolerances.
"""
import numpy as np

SCENARIO_RATES = {
    1: (0.1, 0.5, 0.9),
    2: (0.4, 0.5, 0.6),
    3: (0.6, 1.0, 1.4),
    4: (0.1, 0.2, 1.2),
}

LEVEL_LAW = {
    1: (0.414, 0.048, 0.059, 0.030, 0.032, 0.029, 0.036, 0.049, 0.087, 0.217),
    2: (0.303, 0.050, 0.064, 0.039, 0.043, 0.041, 0.051, 0.068, 0.112, 0.230),
    3: (0.170, 0.031, 0.040, 0.026, 0.030, 0.032, 0.043, 0.066, 0.133, 0.427),
    4: (0.492, 0.053, 0.063, 0.029, 0.029, 0.024, 0.027, 0.035, 0.062, 0.187),
}

# (FIX, HMSE) of the shared table with xi = lambda, and HMSE with no posterior rating
PPOS_FIX_HMSE = {1: (0.308, 0.163), 2: (0.018, 0.099), 3: (0.063, 0.560), 4: (0.469, 0.256)}
PNO_HMSE = {1: 0.285, 2: 0.205, 3: 0.885, 4: 0.397}

# scenario I relativity tables
GAMMA_PPOS = (0.240, 0.364, 0.390, 0.489, 0.544, 0.647, 0.752, 0.913, 1.160, 1.675)
GAMMA_PFOS = (0.224, 0.357, 0.382, 0.488, 0.544, 0.651, 0.759, 0.926, 1.183, 1.722)
GAMMA_PFOS_PURE = np.array([
    (0.724, 1.156, 1.237, 1.579, 1.761, 2.108, 2.458, 2.998, 3.830, 5.576),
    (0.266, 0.425, 0.455, 0.580, 0.647, 0.774, 0.903, 1.102, 1.407, 2.049),
    (0.208, 0.333, 0.356, 0.454, 0.507, 0.606, 0.707, 0.863, 1.102, 1.604),
])
GAMMA_POI = np.array([
    (0.763, 1.330, 1.397, 1.888, 2.041, 2.457, 2.694, 3.059, 3.361, 3.725),
    (0.296, 0.475, 0.511, 0.658, 0.737, 0.884, 1.024, 1.228, 1.505, 1.957),
    (0.180, 0.286, 0.309, 0.398, 0.451, 0.547, 0.651, 0.813, 1.072, 1.626),
])
XI_PFOS = (0.32, 0.59, 0.84)

# scenario I summary: E[M / Lambda | class], FIX, HMSE
REL_MEANS = {
    "ppos": (0.304, 0.805, 1.069),
    "pfos": (0.291, 0.814, 1.089),
    "pfos*": (0.943, 0.969, 1.015),
}
SUMMARY_FIX = {"pno": 0.0, "ppos": 0.3075, "pfos": 0.0022, "poi": 0.0}
SUMMARY_HMSE = {"pno": 0.2853, "ppos": 0.1629, "pfos": 0.1563, "poi": 0.1553}
# sequential changes PNO -> PPOS -> PFOS -> POI as percentages of the largest value
DELTA_FIX_PCT = {"ppos": 100.0, "pfos": -99.3, "poi": -0.7}
DELTA_HMSE_PCT = {"ppos": -42.9, "pfos": -2.3, "poi": -0.4}

# coordinate-descent trace: first five (FIX, HMSE) pairs and the converged pair
TRACE = {
    1: [(0.0000, 0.2853), (0.3075, 0.1629), (0.0013, 0.1564), (0.0047, 0.1563), (0.0021, 0.1563)],
    2: [(0.0000, 0.2053), (0.0182, 0.0988), (0.0004, 0.0970), (0.0004, 0.0970), (0.0004, 0.0970)],
    3: [(0.0000, 0.8853), (0.0626, 0.5598), (0.0021, 0.5476), (0.0023, 0.5476), (0.0023, 0.5476)],
    4: [(0.0000, 0.3973), (0.4686, 0.2560), (0.0075, 0.2474), (0.0113, 0.2473), (0.0093, 0.2473)],
}
TRACE_FINAL = {1: (0.0022, 0.1563), 2: (0.0004, 0.0970), 3: (0.0023, 0.5476), 4: (0.0096, 0.2473)}

# municipal fleet portfolio, psi = 0.782
FLEET_PSI = 0.782
FLEET_RATES_2DP = (0.04, 0.17, 0.42, 0.10, 0.42, 1.05, 0.32, 1.33, 3.29,
                   0.08, 0.36, 0.88, 0.01, 0.05, 0.13, 0.05, 0.21, 0.52)
FLEET_GAMMA_POI = np.array([
    (0.92, 1.65, 1.69, 2.39, 2.52, 3.16, 3.40, 3.96, 4.29, 4.80),
    (0.62, 1.03, 1.09, 1.44, 1.57, 1.86, 2.07, 2.35, 2.63, 2.97),
    (0.35, 0.55, 0.59, 0.76, 0.85, 1.02, 1.17, 1.38, 1.66, 2.07),
    (0.77, 1.32, 1.39, 1.87, 2.02, 2.43, 2.67, 3.03, 3.32, 3.68),
    (0.34, 0.55, 0.59, 0.75, 0.84, 1.00, 1.15, 1.37, 1.64, 2.06),
    (0.16, 0.25, 0.27, 0.35, 0.40, 0.48, 0.58, 0.73, 0.98, 1.55),
    (0.42, 0.68, 0.73, 0.94, 1.05, 1.24, 1.41, 1.64, 1.92, 2.30),
    (0.13, 0.20, 0.22, 0.28, 0.32, 0.39, 0.47, 0.60, 0.84, 1.45),
    (0.05, 0.09, 0.09, 0.12, 0.14, 0.17, 0.21, 0.28, 0.43, 1.21),
    (0.81, 1.41, 1.47, 2.01, 2.16, 2.61, 2.86, 3.25, 3.55, 3.93),
    (0.39, 0.62, 0.67, 0.86, 0.96, 1.14, 1.30, 1.52, 1.80, 2.19),
    (0.19, 0.29, 0.32, 0.41, 0.46, 0.56, 0.66, 0.83, 1.08, 1.62),
    (0.98, 1.75, 1.77, 2.54, 2.59, 3.34, 3.45, 4.17, 4.33, 5.02),
    (0.89, 1.59, 1.65, 2.30, 2.44, 3.03, 3.28, 3.79, 4.12, 4.58),
    (0.71, 1.20, 1.27, 1.68, 1.83, 2.18, 2.40, 2.73, 3.01, 3.36),
    (0.90, 1.60, 1.65, 2.31, 2.45, 3.04, 3.29, 3.80, 4.13, 4.59),
    (0.55, 0.90, 0.96, 1.25, 1.37, 1.62, 1.81, 2.08, 2.35, 2.70),
    (0.29, 0.46, 0.49, 0.64, 0.71, 0.85, 0.99, 1.19, 1.46, 1.91),
])
FLEET_GAMMA_PPOS_ENDS = (0.16, 1.23)
