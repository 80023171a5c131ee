import { esc } from "../html";
import type { ScoredPatient, ScoredPatientList } from "../types";

/** Vitals columns shown on the board, with their contribution keys. */
const VITAL_COLUMNS: Array<[label: string, field: keyof ScoredPatient, riskKey: string]> = [
  ["HR", "heart_rate", "heart_rate"],
  ["RR", "respiratory_rate", "respiratory_rate"],
  ["SpO2", "spo2", "spo2"],
  ["Temp", "body_temp", "body_temp"],
];

function vitalCell(patient: ScoredPatient, field: keyof ScoredPatient, riskKey: string): string {
  // the service already scored every parameter; a nonzero contribution
  // means the vital sits outside its normal range
  const flagged = (patient.contributions[riskKey] ?? 0) > 0;
  const cls = flagged ? ' class="vital flagged"' : ' class="vital"';
  return `<td${cls}>${esc(patient[field])}</td>`;
}

/**
 * Triage board table. Rows appear exactly in the order the service
 * returned them (highest score first); all numbers are the service's
 * values rendered verbatim.
 */
export function renderBoard(data: ScoredPatientList): string {
  if (data.patients.length === 0) {
    return `<p class="empty-state">No patients registered yet.</p>`;
  }
  const rows = data.patients
    .map((p) => {
      const cells = VITAL_COLUMNS.map(([, field, riskKey]) => vitalCell(p, field, riskKey));
      return (
        `<tr data-id="${esc(p.id)}">` +
        `<td class="name">${esc(p.name)}</td>` +
        `<td class="score">${esc(p.score)}</td>` +
        cells.join("") +
        `<td class="actions">` +
        `<button class="edit" data-id="${esc(p.id)}">edit</button> ` +
        `<button class="delete" data-id="${esc(p.id)}">delete</button>` +
        `</td></tr>`
      );
    })
    .join("\n");
  const headers = ["Patient", "Score", ...VITAL_COLUMNS.map(([label]) => label), ""];
  return (
    `<table class="board"><thead><tr>` +
    headers.map((h) => `<th>${esc(h)}</th>`).join("") +
    `</tr></thead><tbody>\n${rows}\n</tbody></table>`
  );
}
