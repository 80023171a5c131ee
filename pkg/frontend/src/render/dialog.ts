import { esc } from "../html";
import type { DialogSessionView } from "../types";

/**
 * Current dialog node with its available moves: one button per choice,
 * a continue button when the node has a default link, and a
 * back-to-checkpoint button.
 */
export function renderDialog(session: DialogSessionView | null): string {
  if (session === null) {
    return `<div class="dialog"><button class="dialog-start">start walkthrough</button></div>`;
  }
  const node = session.node;
  const parts = [
    `<div class="dialog" data-session-id="${esc(session.session_id)}" data-node-id="${esc(node.node_id)}">`,
    `<p class="dialog-text">${esc(node.text)}</p>`,
  ];
  if (node.ended) {
    parts.push(`<p class="dialog-ended">End of walkthrough.</p>`);
    parts.push(`<button class="dialog-start">start over</button>`);
  } else {
    for (const label of node.choices) {
      parts.push(`<button class="dialog-choice" data-choice="${esc(label)}">${esc(label)}</button>`);
    }
    if (node.choices.length === 0) {
      parts.push(`<button class="dialog-continue">continue</button>`);
    }
    parts.push(`<button class="dialog-return">back to checkpoint</button>`);
  }
  parts.push(`</div>`);
  return parts.join("\n");
}
