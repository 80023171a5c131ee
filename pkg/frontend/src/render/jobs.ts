import { esc, flagLabel } from "../html";
import type { VitalsJob } from "../types";

const VITAL_LABELS: Record<string, string> = {
  hr_bpm: "heart rate (bpm)",
  rr_brpm: "respiratory rate (breaths/min)",
  spo2_pct: "SpO2 (%)",
};

/**
 * One job's status card. Estimates, confidences and normal-range badges
 * all come straight from the job's result payload.
 */
export function renderJobPanel(job: VitalsJob): string {
  const head =
    `<div class="job" data-job-id="${esc(job.job_id)}" data-state="${esc(job.state)}">` +
    `<span class="job-kind">${esc(job.kind)}</span> ` +
    `<span class="job-state">${esc(job.state)}</span>`;
  if (job.state === "queued" || job.state === "running") {
    return `${head}<p class="job-progress">waiting for the estimator...</p></div>`;
  }
  if (job.state === "failed") {
    return `${head}<p class="error-banner">${esc(job.error ?? "estimation failed")}</p></div>`;
  }
  const result = job.result ?? {};
  const rows: string[] = [];
  for (const key of ["hr_bpm", "rr_brpm", "spo2_pct"] as const) {
    const value = result[key];
    if (value === undefined) continue;
    const flag = result.flags?.[key];
    const badge = flag
      ? `<span class="badge badge-${esc(flag)}">${esc(flagLabel(flag))}</span>`
      : "";
    const confidence = result.confidence?.[key];
    const confNote =
      confidence === undefined ? "" : `<span class="confidence">confidence ${esc(confidence)}</span>`;
    rows.push(
      `<div class="vital-row" data-vital="${key}">` +
        `<span class="vital-label">${VITAL_LABELS[key]}</span>` +
        `<span class="vital-value">${esc(value)}</span>${badge}${confNote}</div>`,
    );
  }
  return `${head}${rows.join("\n")}</div>`;
}

/** The submission form: a server-side fixture path or uploaded frames. */
export function renderJobForm(): string {
  return (
    `<form class="job-form">` +
    `<label>kind <select name="kind">` +
    `<option value="hr">heart rate</option>` +
    `<option value="rr">respiratory rate</option>` +
    `<option value="spo2">SpO2</option>` +
    `</select></label>` +
    `<label>fps <input name="fps" value="30" inputmode="decimal"/></label>` +
    `<label>server frame directory <input name="dir" placeholder="/path/on/server"/></label>` +
    `<label>or upload frames <input name="files" type="file" multiple accept=".ppm"/></label>` +
    `<button type="submit">submit job</button>` +
    `</form>`
  );
}
