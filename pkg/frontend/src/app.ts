/**
 * Browser bootstrap: wires the DOM to the session API.
 *
 * Serve with any static file server next to a running service, e.g.
 *   casdec serve --port 8000
 *   npx serve frontend
 * and set the base URL field (default http://127.0.0.1:8000).
 */

import { ApiError, SessionApi } from "./api";
import { renderChips, renderHistory, renderSuggestions, renderSummary } from "./render";

interface AppState {
  api: SessionApi;
  sessionId: string | null;
  constraints: string[];
}

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
}

function showError(err: unknown): void {
  const box = byId<HTMLElement>("error");
  if (err instanceof ApiError) {
    const detail =
      err.body.detail != null ? ` — ${JSON.stringify(err.body.detail)}` : "";
    box.textContent = `${err.body.code}: ${err.body.message}${detail}`;
  } else {
    box.textContent = String(err);
  }
  box.hidden = false;
}

function clearError(): void {
  byId<HTMLElement>("error").hidden = true;
}

async function refresh(state: AppState): Promise<void> {
  if (!state.sessionId) return;
  const view = await state.api.getSession(state.sessionId);
  const latest = view.iterations[view.iterations.length - 1];
  byId<HTMLElement>("summary").innerHTML = renderSummary(latest);
  byId<HTMLElement>("history").innerHTML = renderHistory(view.iterations);
  byId<HTMLElement>("chips").innerHTML = renderChips(state.constraints);
  const { suggestions } = await state.api.getSuggestions(state.sessionId);
  byId<HTMLElement>("suggestions").innerHTML = renderSuggestions(suggestions);
}

function addConstraint(state: AppState, text: string): void {
  const trimmed = text.trim();
  if (trimmed.length === 0 || state.constraints.includes(trimmed)) return;
  state.constraints.push(trimmed);
  byId<HTMLElement>("chips").innerHTML = renderChips(state.constraints);
}

export function main(): void {
  const state: AppState = {
    api: new SessionApi(byId<HTMLInputElement>("base-url").value),
    sessionId: null,
    constraints: [],
  };

  byId<HTMLButtonElement>("create").addEventListener("click", async () => {
    clearError();
    state.api = new SessionApi(byId<HTMLInputElement>("base-url").value);
    state.constraints = [];
    try {
      const document_ = byId<HTMLTextAreaElement>("document").value;
      const reference = byId<HTMLTextAreaElement>("reference").value.trim();
      const handle = await state.api.createSession(
        document_,
        reference ? { reference } : {},
      );
      state.sessionId = handle.session_id;
      await refresh(state);
    } catch (err) {
      showError(err);
    }
  });

  // selecting a span of the document and clicking "add selection" turns
  // the selected text into a constraint chip
  byId<HTMLButtonElement>("add-selection").addEventListener("click", () => {
    const selection = window.getSelection()?.toString() ?? "";
    addConstraint(state, selection);
  });

  byId<HTMLElement>("suggestions").addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (target.classList.contains("suggestion-add")) {
      addConstraint(state, target.dataset.text ?? "");
    }
  });

  byId<HTMLElement>("chips").addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (target.classList.contains("chip-remove")) {
      state.constraints.splice(Number(target.dataset.index), 1);
      byId<HTMLElement>("chips").innerHTML = renderChips(state.constraints);
    }
  });

  byId<HTMLButtonElement>("regenerate").addEventListener("click", async () => {
    clearError();
    if (!state.sessionId) return;
    try {
      await state.api.regenerate(state.sessionId, state.constraints);
      await refresh(state);
    } catch (err) {
      showError(err);
    }
  });
}

if (typeof document !== "undefined" && document.getElementById("create")) {
  main();
}
