import type { PatientRecord } from "./types";

/** Inclusive bounds mirroring the service's record invariants. */
export const FIELD_BOUNDS: Record<string, [number, number]> = {
  age: [0, 130],
  height: [30, 260],
  weight: [1, 400],
  heart_rate: [30, 240],
  respiratory_rate: [4, 60],
  spo2: [0, 100],
  body_temp: [30, 45],
};

export const BINARY_FIELDS = [
  "cough",
  "sore_throat",
  "breathing_difficulty",
  "fatigue",
  "preexisting_conditions",
  "pregnancy",
] as const;

const GENDERS = ["male", "female", "other"];

/**
 * Client-side mirror of the record invariants; returns one message per
 * offending field (empty object = valid). The server remains the
 * authority; this only catches mistakes before a round trip.
 */
export function validatePatient(record: Partial<PatientRecord>): Record<string, string> {
  const errors: Record<string, string> = {};
  if (!record.name || record.name.trim() === "") {
    errors.name = "name is required";
  }
  if (record.gender !== undefined && !GENDERS.includes(record.gender)) {
    errors.gender = `gender must be one of ${GENDERS.join(", ")}`;
  }
  for (const [field, [lo, hi]] of Object.entries(FIELD_BOUNDS)) {
    const value = record[field as keyof PatientRecord];
    if (value === undefined || value === null || value === "") {
      errors[field] = `${field} is required`;
      continue;
    }
    const num = Number(value);
    if (Number.isNaN(num) || num < lo || num > hi) {
      errors[field] = `${field} must be between ${lo} and ${hi}`;
    }
  }
  for (const field of BINARY_FIELDS) {
    const value = record[field];
    if (value !== undefined && value !== 0 && value !== 1) {
      errors[field] = `${field} must be 0 or 1`;
    }
  }
  return errors;
}
