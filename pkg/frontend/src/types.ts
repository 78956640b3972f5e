/** Wire types for the gazechart HTTP API.
 *
 * These mirror the JSON the service actually sends; docs/api-schema.json in
 * the backend repository describes the same routes. Field names are kept in
 * snake_case so payloads can be used without mapping layers.
 */

export interface ChartParamsWire {
  frame_width: number;
  frame_height: number;
  font_size: number;
  density: number;
  jitter_fraction: number;
  seed: number;
}

export interface PlacementWire {
  label: string;
  x: number;
  y: number;
}

export interface ChartWire {
  params: ChartParamsWire;
  d_v: number;
  d_h: number;
  placements: PlacementWire[];
}

/** [t seconds, x px, y px] samples; t starts at 0 and is evenly spaced. */
export type PathSample = [number, number, number];

export interface TutorialWire {
  duration: number;
  letter: string;
  color: string;
  path: PathSample[];
  final_position: [number, number];
  chart: ChartWire;
  seed: number;
}

export interface TrialWire {
  video_id: string;
  frame_time_ms: number;
  clip_start_ms: number;
  chart: ChartWire;
  chart_seconds: number;
}

export interface ScreeningWire {
  attempts: number;
  passes: number;
  status: "in_training" | "approved" | "rejected";
}

export interface VideoWire {
  video_id: string;
  uri?: string;
  duration_s: number;
  frame_width: number;
  frame_height: number;
}

export interface FrameOfInterestWire {
  video_id: string;
  frame_time_ms: number;
}

export interface CampaignWire {
  campaign_id: string;
  videos: VideoWire[];
  frames_of_interest: FrameOfInterestWire[];
  params: {
    clip_seconds: number;
    tutorial_seconds: number;
    chart_seconds: number;
    approval_radius: number;
    [k: string]: number;
  };
  pay_per_session: number;
  batch_size: number;
}

export interface ParticipantWire {
  participant_id: string;
  screening: ScreeningWire;
}

export interface SessionWire {
  session_id: string;
  campaign_id: string;
  participant_id: string;
  status: string;
  trial_count: number;
}

// GET /sessions/{id}/next returns one of these, discriminated on kind.

export interface TutorialStepWire {
  kind: "tutorial";
  status: string;
  step_id: string;
  tutorial: TutorialWire;
  chart_seconds: number;
  attempts: number;
  passes: number;
}

export interface TrialStepWire {
  kind: "trial";
  status: string;
  step_id: string;
  trial_index: number;
  trial_count: number;
  trial: TrialWire;
}

export interface DoneStepWire {
  kind: "done";
  status: string;
  pay: number;
  trials_answered: number;
}

export interface RejectedStepWire {
  kind: "rejected";
  status: string;
}

export interface AbandonedStepWire {
  kind: "abandoned";
  status: string;
}

export type StepWire =
  | TutorialStepWire
  | TrialStepWire
  | DoneStepWire
  | RejectedStepWire
  | AbandonedStepWire;

export interface TutorialResultWire {
  kind: "tutorial_result";
  step_id: string;
  passed: boolean;
  reason: string;
  distance: number | null;
  attempts: number;
  passes: number;
  status: string;
}

export interface TrialResultWire {
  kind: "trial_result";
  step_id: string;
  valid: boolean;
  status: string;
}

export type SubmitResultWire = TutorialResultWire | TrialResultWire;

export interface DensityWire {
  n_samples: number;
  width: number;
  height: number;
  downsample: number;
  values: number[][];
}

export interface CompareWire {
  chi2_ours: number;
  chi2_uniform: number;
  n_ours: number;
  n_reference: number;
  downsample: number;
}

/** Client-side monotonic timestamps recorded around one step, all in ms. */
export interface StepTimestamps {
  animation_started_at?: number;
  animation_ended_at?: number;
  video_started_at?: number;
  video_paused_at?: number;
  chart_shown_at: number;
  chart_hidden_at: number;
  response_submitted_at: number;
}

export interface StepOutcome {
  text: string;
  timestamps: StepTimestamps;
  /** Input box content at the moment the chart appeared; must be "". */
  input_value_at_display: string;
}
