import { ApiClient, ApiError } from "./api";
import { pollJob } from "./poll";
import { renderBoard } from "./render/board";
import { renderDialog } from "./render/dialog";
import { renderEditor, renderSearchBar } from "./render/editor";
import { renderJobForm, renderJobPanel } from "./render/jobs";
import { validatePatient } from "./validate";
import type { PatientRecord, ScoredPatientList, VitalKind } from "./types";

const api = new ApiClient("");

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

function toast(message: string): void {
  el("status").textContent = message;
}

// ---- triage board ---------------------------------------------------------

let lastBoard: ScoredPatientList = { patients: [] };

async function refreshBoard(): Promise<void> {
  try {
    lastBoard = await api.board();
    el("board").innerHTML = renderBoard(lastBoard);
  } catch (err) {
    toast(`board refresh failed: ${(err as Error).message}`);
  }
}

function readForm(form: HTMLFormElement): Partial<PatientRecord> {
  const data = new FormData(form);
  const record: Record<string, unknown> = { id: form.dataset.id || crypto.randomUUID() };
  for (const key of ["name", "gender", "prescription_note"]) {
    record[key] = String(data.get(key) ?? "");
  }
  for (const key of [
    "age", "height", "weight", "heart_rate", "respiratory_rate", "spo2", "body_temp",
  ]) {
    const raw = String(data.get(key) ?? "").trim();
    record[key] = raw === "" ? undefined : Number(raw); // empty stays "required"
  }
  for (const key of [
    "cough", "sore_throat", "breathing_difficulty", "fatigue",
    "preexisting_conditions", "pregnancy",
  ]) {
    record[key] = data.get(key) === null ? 0 : 1;
  }
  return record as Partial<PatientRecord>;
}

function openEditor(record: Partial<PatientRecord>, errors = {}): void {
  el("editor").innerHTML = renderEditor(record, errors);
}

async function onBoardClick(event: Event): Promise<void> {
  const target = event.target as HTMLElement;
  const id = target.dataset.id;
  if (!id) return;
  try {
    if (target.classList.contains("edit")) {
      openEditor(await api.getPatient(id));
    } else if (target.classList.contains("delete")) {
      await api.deletePatient(id);
      await refreshBoard();
    }
  } catch (err) {
    toast(`patient action failed: ${(err as Error).message}`);
  }
}

async function onEditorSubmit(event: Event): Promise<void> {
  event.preventDefault();
  const form = event.target as HTMLFormElement;
  const record = readForm(form);
  const errors = validatePatient(record);
  if (Object.keys(errors).length > 0) {
    openEditor(record, errors);
    return;
  }
  try {
    await api.savePatient(record as PatientRecord);
    el("editor").innerHTML = "";
    await refreshBoard(); // service re-scores; the board re-sorts itself
  } catch (err) {
    toast(`save failed: ${(err as Error).message}`);
  }
}

async function onSearch(): Promise<void> {
  const name = (document.querySelector(".search-name") as HTMLInputElement).value;
  const ageText = (document.querySelector(".search-age") as HTMLInputElement).value;
  if (!name && !ageText) {
    await refreshBoard();
    return;
  }
  try {
    const result = await api.searchPatients(
      name || undefined,
      ageText ? Number(ageText) : undefined,
    );
    const ids = new Set(result.patients.map((p) => p.id));
    el("board").innerHTML = renderBoard({
      patients: lastBoard.patients.filter((p) => ids.has(p.id)),
    });
  } catch (err) {
    toast(`search failed: ${(err as Error).message}`);
  }
}

// ---- vitals jobs ----------------------------------------------------------

function fileToBase64(file: File): Promise<string> {
  return new Promise((resolve, reject) => {
    const reader = new FileReader();
    reader.onerror = () => reject(reader.error);
    reader.onload = () => {
      const url = reader.result as string; // data:...;base64,<payload>
      resolve(url.slice(url.indexOf(",") + 1));
    };
    reader.readAsDataURL(file);
  });
}

async function onJobSubmit(event: Event): Promise<void> {
  event.preventDefault();
  const form = event.target as HTMLFormElement;
  const data = new FormData(form);
  const kind = String(data.get("kind")) as VitalKind;
  const fps = Number(data.get("fps"));
  const dir = String(data.get("dir") ?? "").trim();
  const files = (form.querySelector('input[name="files"]') as HTMLInputElement).files;
  try {
    const request = dir
      ? { kind, fps, dir }
      : { kind, fps, frames: await Promise.all(Array.from(files ?? []).map(fileToBase64)) };
    const { job_id } = await api.submitJob(request);
    const panel = el("job-panel");
    const done = await pollJob(api, job_id, {
      onUpdate: (job) => {
        panel.innerHTML = renderJobPanel(job);
      },
    });
    panel.innerHTML = renderJobPanel(done);
  } catch (err) {
    const message = err instanceof ApiError ? err.message : String(err);
    el("job-panel").innerHTML = `<p class="error-banner">${message}</p>`;
  }
}

// ---- dialog walkthrough ----------------------------------------------------

let dialogSessionId: string | null = null;

async function onDialogClick(event: Event): Promise<void> {
  const target = event.target as HTMLElement;
  try {
    if (target.classList.contains("dialog-start")) {
      const session = await api.startDialog("screening");
      dialogSessionId = session.session_id;
      el("dialog").innerHTML = renderDialog(session);
    } else if (dialogSessionId && target.classList.contains("dialog-choice")) {
      el("dialog").innerHTML = renderDialog(
        await api.stepDialog(dialogSessionId, target.dataset.choice),
      );
    } else if (dialogSessionId && target.classList.contains("dialog-continue")) {
      el("dialog").innerHTML = renderDialog(await api.stepDialog(dialogSessionId));
    } else if (dialogSessionId && target.classList.contains("dialog-return")) {
      el("dialog").innerHTML = renderDialog(await api.returnDialog(dialogSessionId));
    }
  } catch (err) {
    toast(`dialog: ${(err as Error).message}`);
  }
}

// ---- wiring ----------------------------------------------------------------

export function mount(): void {
  el("search").innerHTML = renderSearchBar();
  el("job-form").innerHTML = renderJobForm();
  el("dialog").innerHTML = renderDialog(null);

  el("board").addEventListener("click", onBoardClick);
  el("editor").addEventListener("submit", onEditorSubmit);
  el("dialog").addEventListener("click", onDialogClick);
  el("job-form").addEventListener("submit", onJobSubmit);
  el("search").addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (target.classList.contains("search")) void onSearch();
    if (target.classList.contains("clear-search")) void refreshBoard();
  });
  el("new-patient").addEventListener("click", () => openEditor({}));
  el("refresh").addEventListener("click", () => void refreshBoard());

  void refreshBoard();
}

if (typeof document !== "undefined" && document.getElementById("board")) {
  mount();
}
