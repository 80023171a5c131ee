/** Shapes of the service responses the dashboard consumes. */

export type Gender = "male" | "female" | "other";
export type Binary = 0 | 1;

export interface PatientRecord {
  id: string;
  name: string;
  age: number;
  gender: Gender;
  height: number;
  weight: number;
  heart_rate: number;
  respiratory_rate: number;
  spo2: number;
  body_temp: number;
  cough: Binary;
  sore_throat: Binary;
  breathing_difficulty: Binary;
  fatigue: Binary;
  preexisting_conditions: Binary;
  pregnancy: Binary;
  prescription_note: string;
  created_at: string;
  updated_at: string;
}

/** A record as returned by GET /v1/patients?sort=score. */
export interface ScoredPatient extends PatientRecord {
  score: number;
  contributions: Record<string, number>;
}

export interface PatientList {
  patients: PatientRecord[];
}

export interface ScoredPatientList {
  patients: ScoredPatient[];
}

export type VitalKind = "hr" | "rr" | "spo2";
export type JobState = "queued" | "running" | "done" | "failed";

export interface VitalsResult {
  hr_bpm?: number;
  rr_brpm?: number;
  spo2_pct?: number;
  confidence?: Record<string, number>;
  flags?: Record<string, string>;
}

export interface VitalsJob {
  job_id: string;
  kind: VitalKind;
  state: JobState;
  result: VitalsResult | null;
  error: string | null;
  created_at: string;
  started_at: string | null;
  finished_at: string | null;
}

export interface JobRequest {
  kind: VitalKind;
  fps: number;
  frames?: string[];
  dir?: string;
  roi?: string;
  cal?: { A: number; B: number };
}

export interface DialogNodeView {
  node_id: string;
  text: string;
  choices: string[];
  is_checkpoint: boolean;
  ended: boolean;
}

export interface DialogSessionView {
  session_id: string;
  node: DialogNodeView;
}
