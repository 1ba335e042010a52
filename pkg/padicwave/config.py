from os.path import join
from .constants import DATA_DIR

# Packaged metric descriptions, keyed by the names accepted on the command line
METRIC_FILES = {
    "standard": join(DATA_DIR, "standard.metric"),
    "s": join(DATA_DIR, "s.metric"),
    "q": join(DATA_DIR, "q.metric"),
    "flag": join(DATA_DIR, "flag.metric"),
}

# Matrix each packaged metric is paired with when --matrix is omitted
METRIC_MATRICES = {
    "s": "S",
    "q": "Q",
    "flag": "cyclic",
}
