import type {
  DialogSessionView,
  JobRequest,
  PatientList,
  PatientRecord,
  ScoredPatientList,
  VitalsJob,
} from "./types";

export class ApiError extends Error {
  constructor(
    message: string,
    public readonly status: number,
  ) {
    super(message);
  }
}

/**
 * Thin typed client over the service REST API. All dashboard data flows
 * through here; the client never post-processes numbers, it only parses
 * JSON and reports errors.
 */
export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: typeof fetch = globalThis.fetch?.bind(globalThis),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(`${this.baseUrl}${path}`, {
      headers: { "content-type": "application/json" },
      ...init,
    });
    if (resp.status === 204) {
      return undefined as T;
    }
    const body = await resp.json().catch(() => ({}));
    if (!resp.ok) {
      throw new ApiError(body?.error ?? `request failed (${resp.status})`, resp.status);
    }
    return body as T;
  }

  board(): Promise<ScoredPatientList> {
    return this.request("/v1/patients?sort=score");
  }

  searchPatients(name?: string, age?: number): Promise<PatientList> {
    const params = new URLSearchParams();
    if (name) params.set("name", name);
    if (age !== undefined && !Number.isNaN(age)) params.set("age", String(age));
    const qs = params.toString();
    return this.request(`/v1/patients${qs ? `?${qs}` : ""}`);
  }

  getPatient(id: string): Promise<PatientRecord> {
    return this.request(`/v1/patients/${encodeURIComponent(id)}`);
  }

  savePatient(record: PatientRecord): Promise<PatientRecord> {
    return this.request(`/v1/patients/${encodeURIComponent(record.id)}`, {
      method: "PUT",
      body: JSON.stringify(record),
    });
  }

  deletePatient(id: string): Promise<void> {
    return this.request(`/v1/patients/${encodeURIComponent(id)}`, { method: "DELETE" });
  }

  submitJob(job: JobRequest): Promise<{ job_id: string }> {
    return this.request("/v1/vitals/jobs", { method: "POST", body: JSON.stringify(job) });
  }

  getJob(jobId: string): Promise<VitalsJob> {
    return this.request(`/v1/vitals/jobs/${encodeURIComponent(jobId)}`);
  }

  startDialog(graphId: string): Promise<DialogSessionView> {
    return this.request("/v1/dialog/sessions", {
      method: "POST",
      body: JSON.stringify({ graph_id: graphId }),
    });
  }

  stepDialog(sessionId: string, choice?: string): Promise<DialogSessionView> {
    return this.request(`/v1/dialog/sessions/${encodeURIComponent(sessionId)}/step`, {
      method: "POST",
      body: JSON.stringify(choice === undefined ? {} : { choice }),
    });
  }

  returnDialog(sessionId: string): Promise<DialogSessionView> {
    return this.request(`/v1/dialog/sessions/${encodeURIComponent(sessionId)}/return`, {
      method: "POST",
    });
  }
}
