NORMAL = "normal"
FAILED = "failed"
UNKNOWN = "unknown"

# class order used by models and confusion matrices; index 0 wins argmax ties
CLASSES = (NORMAL, FAILED)

H_A = "h_a"
H_B = "h_b"
H = "h"
FEATURE_NAMES = (H_A, H_B, H)

TRACE_ID = "trace_id"
LABEL = "label"
SYNTHETIC = "synthetic"
CONFIDENCE = "confidence"

DEFAULT_MIN_LEAF = 2
DEFAULT_CONFIDENCE_FACTOR = 0.25
DEFAULT_SMOTE_TARGET = 0.2
DEFAULT_SMOTE_NEIGHBORS = 5
DEFAULT_FOLDS = 10
DEFAULT_SEED = 0
DEFAULT_M_VALUES = (2, 10, 50, 100, 200)
MAX_MIN_LEAF = 1_000_000
