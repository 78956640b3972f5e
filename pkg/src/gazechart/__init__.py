"""Crowdsourced gaze-location collection.

Probe charts replace single video frames with a jittered grid of
character triplets; the triplet a viewer reports resolves to a pixel
anchor, and many reports per frame aggregate into a gaze density. The
package covers the whole loop: chart construction, participant
screening, the paid session protocol (offered over HTTP), density
estimation and comparison, plus simulation tools for parameter sweeps.
"""

from .analysis import (
    ComparisonReport,
    DensityGrid,
    SampleSet,
    chi2_distance,
    compare,
    compare_density,
    downsample_grid,
    estimate_density,
    ingest_reference,
    render_heatmap,
    write_reference_csv,
)
from .chart import (
    ChartParams,
    ChartSpec,
    TripletPlacement,
    derive_spacing,
    generate_chart,
    lookup,
)
from .errors import (
    ConfigurationError,
    DataError,
    EmptyDataError,
    GazechartError,
    LayoutError,
    ParameterError,
    ParseError,
    ProtocolError,
    StateError,
)
from .session import (
    Campaign,
    ExperimentParams,
    FrameOfInterest,
    GazeSample,
    Session,
    SessionStatus,
    TrialSpec,
    Video,
    admit_participant,
    build_session,
    estimate_cost,
    submit_trial_response,
    success_rate,
    validate_campaign,
    write_samples_csv,
)
from .simulate import (
    GaussianMixtureGaze,
    MixtureComponent,
    ParticipantModel,
    PipelineResult,
    SweepConfig,
    UniformGaze,
    run_pipeline,
    run_tutorial_sweep,
    simulate_report,
)
from .store import ExperimentStore
from .tutorial import (
    PathParams,
    ScreeningState,
    ScreeningStatus,
    TutorialScore,
    TutorialSpec,
    generate_tutorial,
    record_attempt,
    score_tutorial,
)

__version__ = "0.1.0"
