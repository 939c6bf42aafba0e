/**
 * Pure rendering helpers: service payloads in, HTML strings out.
 *
 * Everything here is presentation. Satisfaction flags, diffs, scores and
 * suggestion filtering all come from the service; the only computation
 * this module does is locating constraint phrases inside the token list
 * so they can be wrapped in <mark> tags.
 */

import type { Iteration, Suggestion } from "./api";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/**
 * Token positions covered by any constraint phrase. A constraint chip
 * "itv wales" matches the token subsequence ["itv", "wales"], not raw
 * substrings, so "wales" never highlights inside "new south wales..."
 * style near-misses.
 */
export function highlightSpans(
  tokens: string[],
  constraints: string[],
): boolean[] {
  const covered = tokens.map(() => false);
  for (const constraint of constraints) {
    const phrase = constraint.split(/\s+/).filter((w) => w.length > 0);
    if (phrase.length === 0) continue;
    for (let i = 0; i + phrase.length <= tokens.length; i++) {
      if (phrase.every((word, j) => tokens[i + j] === word)) {
        for (let j = 0; j < phrase.length; j++) covered[i + j] = true;
      }
    }
  }
  return covered;
}

/** Summary text with constraint occurrences wrapped in <mark>. */
export function renderSummary(iteration: Iteration): string {
  const covered = highlightSpans(iteration.tokens, iteration.constraints);
  const parts: string[] = [];
  for (let i = 0; i < iteration.tokens.length; i++) {
    const word = escapeHtml(iteration.tokens[i]);
    parts.push(
      covered[i] ? `<mark class="constraint-hit">${word}</mark>` : word,
    );
  }
  const badges: string[] = [];
  if (iteration.constraints.length > 0) {
    badges.push(
      iteration.satisfied
        ? '<span class="badge satisfied">satisfied</span>'
        : '<span class="badge unsatisfied">unsatisfied</span>',
    );
  }
  if (iteration.fallback_used) {
    badges.push('<span class="badge fallback">fallback</span>');
  }
  if (iteration.rouge) {
    badges.push(
      `<span class="badge rouge">R-1 ${iteration.rouge.rouge1.toFixed(2)}` +
        ` · R-2 ${iteration.rouge.rouge2.toFixed(2)}` +
        ` · R-L ${iteration.rouge.rougeL.toFixed(2)}</span>`,
    );
  }
  return (
    `<p class="summary-text">${parts.join(" ")}</p>` +
    (badges.length > 0 ? `<p class="badges">${badges.join(" ")}</p>` : "")
  );
}

/** One removable chip per active constraint. */
export function renderChips(constraints: string[]): string {
  if (constraints.length === 0) {
    return '<p class="chips-empty">no constraints — select document text or pick a suggestion</p>';
  }
  const chips = constraints.map(
    (text, i) =>
      `<span class="chip" data-index="${i}">${escapeHtml(text)}` +
      `<button class="chip-remove" data-index="${i}" title="remove">×</button></span>`,
  );
  return chips.join(" ");
}

export function renderSuggestions(suggestions: Suggestion[]): string {
  if (suggestions.length === 0) {
    return '<p class="suggestions-empty">no suggestions</p>';
  }
  const items = suggestions.map((s) => {
    const cls = s.selected ? "suggestion selected" : "suggestion filtered";
    const note = s.filtered_reason
      ? ` <span class="filtered-reason">(${escapeHtml(s.filtered_reason)})</span>`
      : "";
    const button = s.selected
      ? `<button class="suggestion-add" data-text="${escapeHtml(s.text)}">add</button> `
      : "";
    return (
      `<li class="${cls}">${button}${escapeHtml(s.text)}` +
      ` <span class="score">${s.score.toFixed(2)}</span>${note}</li>`
    );
  });
  return `<ul class="suggestions">${items.join("")}</ul>`;
}

function renderDiff(iteration: Iteration): string {
  if (!iteration.diff) return "";
  const added = iteration.diff.added
    .filter((s) => s.text.length > 0)
    .map((s) => `<ins>${escapeHtml(s.text)}</ins>`);
  const removed = iteration.diff.removed
    .filter((s) => s.text.length > 0)
    .map((s) => `<del>${escapeHtml(s.text)}</del>`);
  if (added.length === 0 && removed.length === 0) {
    return '<p class="diff unchanged">no change from previous iteration</p>';
  }
  return `<p class="diff">${[...added, ...removed].join(" ")}</p>`;
}

/** Full history pane: every iteration with its constraints and diff. */
export function renderHistory(iterations: Iteration[]): string {
  const entries = iterations.map((it) => {
    const label =
      it.constraints.length === 0
        ? "unconstrained"
        : it.constraints.map(escapeHtml).join(", ");
    return (
      `<li class="history-entry" data-index="${it.index}">` +
      `<h4>iteration ${it.index} — ${label}</h4>` +
      renderSummary(it) +
      renderDiff(it) +
      `</li>`
    );
  });
  return `<ol class="history">${entries.join("")}</ol>`;
}
