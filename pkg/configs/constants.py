from __future__ import annotations

from pathlib import Path

BASE_DIR = Path(__file__).resolve().parent.parent
SCHEMAS_DIR = BASE_DIR / "schemas"
CONFIGS_DIR = BASE_DIR / "data" / "configs"
EXPECTED_REPORTS_DIR = BASE_DIR / "data" / "expected_reports"

SOLVE_REPORT_SCHEMA = SCHEMAS_DIR / "solve_report_schema.json"
VERIFY_REPORT_SCHEMA = SCHEMAS_DIR / "verify_report_schema.json"
LOGSOB_REPORT_SCHEMA = SCHEMAS_DIR / "logsob_report_schema.json"
SWEEP_REPORT_SCHEMA = SCHEMAS_DIR / "sweep_report_schema.json"

PROFILE_FILENAME = "profile.csv"
REPORT_FILENAME = "report.json"
VERIFICATION_FILENAME = "verification.json"
LOGSOB_FILENAME = "logsob.json"
SWEEP_CSV_FILENAME = "sweep.csv"
SWEEP_JSON_FILENAME = "sweep.json"

# grid
DEFAULT_RADIUS = 20.0
DEFAULT_NODES = 2001
DEFAULT_ORDER = 4
MIN_DIMENSION = 5
MIN_NODES = 9

# membership of P = {int G > 0}
MEMBERSHIP_GUARD = 1e-12
# relative residual denominators
RESIDUAL_FLOOR = 1e-30
# InequalityReport.holds
INEQUALITY_SLACK = 1e-10
NORMALIZATION_TOLERANCE = 1e-6
QUADRATURE_TOLERANCE = 1e-12

# solver
DEFAULT_MAX_ITERATIONS = 5000
DEFAULT_ENERGY_TOLERANCE = 1e-8
DEFAULT_RESIDUAL_TOLERANCE = 1e-6
DEFAULT_STALL_TOLERANCE = 1e-5
DEFAULT_BACKTRACKING = 0.5
DEFAULT_ARMIJO = 1e-4
DEFAULT_MAX_STEP = 1.0
DEFAULT_MIN_STEP = 1e-10
DEFAULT_SHIFT = 1.0
DEFAULT_EPSILON_FIRST = 0.5
DEFAULT_EPSILON_COUNT = 20
DEFAULT_AMPLITUDES = tuple(float(2**k) for k in range(11))
# damped Newton finish of each stage
NEWTON_MAX_ITERATIONS = 50
NEWTON_MIN_DAMPING = 2.0**-12
TAIL_FRACTION = 0.9

# verification
DEFAULT_POHOZAEV_TOLERANCE = 1e-4
DEFAULT_PDE_TOLERANCE = 1e-4

# random test fields
RANDOM_FIELD_COMPONENTS = 3
RANDOM_FIELD_WIDTHS = (0.8, 2.0)
BATTERY_RANDOM_FIELDS = 50
BATTERY_DILATIONS = (0.5, 1.0, 2.0)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_IO = 4
EXIT_TOLERANCE = 5
