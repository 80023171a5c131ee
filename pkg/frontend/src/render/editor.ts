import { esc } from "../html";
import { BINARY_FIELDS, FIELD_BOUNDS } from "../validate";
import type { PatientRecord } from "../types";

const NUMERIC_FIELDS = Object.keys(FIELD_BOUNDS);

function inlineError(field: string, errors: Record<string, string>): string {
  const message = errors[field];
  return message ? `<span class="field-error" data-field="${esc(field)}">${esc(message)}</span>` : "";
}

/**
 * Patient form. Values render verbatim from the record; validation
 * messages (if any) appear inline next to their field.
 */
export function renderEditor(
  record: Partial<PatientRecord>,
  errors: Record<string, string> = {},
): string {
  const parts: string[] = [`<form class="patient-editor" data-id="${esc(record.id ?? "")}">`];
  parts.push(
    `<label>name <input name="name" value="${esc(record.name ?? "")}"/>` +
      `${inlineError("name", errors)}</label>`,
  );
  parts.push(
    `<label>gender <select name="gender">` +
      ["male", "female", "other"]
        .map(
          (g) =>
            `<option value="${g}"${record.gender === g ? " selected" : ""}>${g}</option>`,
        )
        .join("") +
      `</select>${inlineError("gender", errors)}</label>`,
  );
  for (const field of NUMERIC_FIELDS) {
    const value = record[field as keyof PatientRecord];
    parts.push(
      `<label>${esc(field)} ` +
        `<input name="${esc(field)}" inputmode="decimal" value="${esc(value ?? "")}"/>` +
        `${inlineError(field, errors)}</label>`,
    );
  }
  for (const field of BINARY_FIELDS) {
    const checked = record[field] === 1 ? " checked" : "";
    parts.push(
      `<label class="symptom">` +
        `<input type="checkbox" name="${esc(field)}"${checked}/> ${esc(field)}` +
        `${inlineError(field, errors)}</label>`,
    );
  }
  parts.push(
    `<label>prescription note ` +
      `<textarea name="prescription_note">${esc(record.prescription_note ?? "")}</textarea></label>`,
  );
  parts.push(`<button type="submit" class="save">save</button></form>`);
  return parts.join("\n");
}

/** Search controls above the board: name substring plus exact age. */
export function renderSearchBar(name = "", age = ""): string {
  return (
    `<div class="search-bar">` +
    `<input class="search-name" placeholder="name contains..." value="${esc(name)}"/>` +
    `<input class="search-age" placeholder="age" inputmode="numeric" value="${esc(age)}"/>` +
    `<button class="search">search</button>` +
    `<button class="clear-search">clear</button>` +
    `</div>`
  );
}
