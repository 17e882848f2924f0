"""Default parameters, grids and tolerances, kept in one place.

=====================  ===========================================  =========
name                   meaning                                      value
=====================  ===========================================  =========
c, q, theta, psi       single-run parameters (radians)              5, 0.7, 1.0, 0
t_end, n               trajectory length and row count              10, 1000
GRID_C                 verification grid over c                     -2, 0, 1, 5, 10
GRID_Q                 verification grid over q                     0, 0.5, 1, 2
GRID_THETA             verification grid over theta                 0, pi/6, pi/3, pi/2
LORENTZ_SAMPLES        residual sample count on [0, LORENTZ_T]      100 on [0, 20]
ORACLE_T, ORACLE_STEP  RK4 comparison time and step                 10, 1e-3
ORDER_STEPS            coarse/fine steps for the order estimate     0.005, 0.0025
GYRO_WINDOW, GYRO_DT   central-difference window and spacing        1, 1e-4
=====================  ===========================================  =========
"""

import math

C = 5.0
Q = 0.7
THETA = 1.0
PSI = 0.0
T_END = 10.0
N_ROWS = 1000
SWEEP_ROWS = 200

GRID_C = (-2.0, 0.0, 1.0, 5.0, 10.0)
GRID_Q = (0.0, 0.5, 1.0, 2.0)
GRID_THETA = (0.0, math.pi / 6, math.pi / 3, math.pi / 2)

LORENTZ_T = 20.0
LORENTZ_SAMPLES = 100
ORACLE_T = 10.0
ORACLE_STEP = 1e-3
ORDER_STEPS = (0.005, 0.0025)
ORDER_RANGE = (3.8, 4.2)
GYRO_WINDOW = 1.0
GYRO_DT = 1e-4

MAX_DEN = 10**6
RATIONAL_TOL = 1e-12

TOLERANCES = {
    "curvature": 1e-11,
    "natred": 1e-12,
    "contact": 1e-12,
    "standard_field": 1e-12,
    "lorentz": 1e-12,
    "oracle": 1e-6,
    "gyrostat": 1e-6,
}
