/** Minimal HTML-string helpers shared by the renderers. */

export function esc(value: unknown): string {
  return String(value)
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

/** Human label for a service flag value, e.g. "below_normal" -> "below normal". */
export function flagLabel(flag: string): string {
  return flag.replaceAll("_", " ");
}
