"""Default experiment parameters.

Every module takes these as overridable arguments; nothing below is read
from global state at call time.
"""

# step durations (seconds)
CLIP_SECONDS = 10.0
TUTORIAL_SECONDS = 3.0
CHART_SECONDS = 1.0

# probe chart geometry
FONT_SIZE_PX = 20
TRIPLET_DENSITY = 0.5
JITTER_FRACTION = 0.25

# screening / scoring
APPROVAL_RADIUS_PX = 100.0
MAX_TUTORIAL_ATTEMPTS = 10
REQUIRED_PASSES = 2

# participant admission
MIN_SCREEN_WIDTH = 1024
MIN_SCREEN_HEIGHT = 768

# campaign economics
BATCH_SIZE = 6
PAY_PER_SESSION = 0.15

# density estimation: bandwidth used when a sample set is too small or
# too degenerate for Scott's rule (matches the default vertical spacing)
BANDWIDTH_FALLBACK_PX = 40.0
