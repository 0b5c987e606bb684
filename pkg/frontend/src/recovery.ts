/** DOM wiring for the recovery panel. Pure rendering: every state shown
 * comes straight from a server response held by WorkbenchSession. */

import { ApiClient, Candidate, SessionView } from "./api.js";
import { fitnessBand, fitnessThresholds, firstLowFitness } from "./colors.js";
import { WorkbenchSession } from "./state.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export class RecoveryPanel {
  private session: WorkbenchSession | null = null;
  private selected: number | null = null;

  constructor(private client: ApiClient, private root: HTMLElement) {
    this.renderCreateForm();
  }

  private query<T extends HTMLElement>(selector: string): T {
    const node = this.root.querySelector(selector);
    if (!node) throw new Error(`missing ${selector}`);
    return node as T;
  }

  private renderCreateForm() {
    this.root.innerHTML = `
      <form class="create-form">
        <label>scheme
          <select name="scheme">
            <option value="fibonarng">fibonarng</option>
            <option value="polycrypt">polycrypt</option>
          </select>
        </label>
        <label>ciphertext <input name="ciphertext" required spellcheck="false"></label>
        <label>key file (server path) <input name="keyfile" required spellcheck="false"></label>
        <button type="submit">start session</button>
        <span class="error" role="alert"></span>
      </form>
      <section class="session" hidden>
        <header>
          <span class="session-id"></span>
          <span class="digest" title="key digest"></span>
          <button class="auto">auto locate</button>
          <button class="undo" disabled>undo</button>
          <button class="save">save</button>
        </header>
        <div class="derived" aria-label="derived plaintext"></div>
        <div class="corrections"></div>
        <div class="candidates"></div>
      </section>`;
    const form = this.query<HTMLFormElement>("form.create-form");
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      const data = new FormData(form);
      this.start(
        String(data.get("scheme")),
        String(data.get("ciphertext")),
        String(data.get("keyfile")),
      );
    });
    this.query<HTMLButtonElement>("button.auto").addEventListener("click", () =>
      this.autoSuggest(),
    );
    this.query<HTMLButtonElement>("button.undo").addEventListener("click", () =>
      this.undo(),
    );
    this.query<HTMLButtonElement>("button.save").addEventListener("click", () =>
      this.save(),
    );
  }

  private showError(message: string) {
    this.query<HTMLElement>(".error").textContent = message;
  }

  async start(scheme: string, ciphertext: string, keyfile: string) {
    try {
      this.session = await WorkbenchSession.create(this.client, {
        scheme,
        ciphertext,
        keyfile,
      });
      this.showError("");
      this.renderSession();
    } catch (err) {
      this.showError(String((err as Error).message ?? err));
    }
  }

  /** Used by tests and the e2e flow to adopt an existing session. */
  adopt(session: WorkbenchSession) {
    this.session = session;
    this.renderSession();
  }

  private renderSession() {
    if (!this.session) return;
    const view = this.session.view;
    this.query<HTMLElement>("section.session").hidden = false;
    this.query<HTMLElement>(".session-id").textContent = view.id;
    this.query<HTMLElement>(".digest").textContent = `key ${view.key_digest.slice(0, 12)}`;
    this.query<HTMLButtonElement>("button.undo").disabled = !this.session.canUndo;
    this.renderDerived(view);
    this.renderCorrections(view);
  }

  private renderDerived(view: SessionView) {
    const container = this.query<HTMLElement>(".derived");
    container.innerHTML = "";
    const thresholds = fitnessThresholds(view.fitness);
    const suspect = firstLowFitness(view.fitness, view.suspect);
    view.derived.split("").forEach((letter, i) => {
      const span = el("span", `pos ${fitnessBand(view.fitness[i], thresholds)}`, letter);
      span.dataset.position = String(i);
      if (i === suspect) span.classList.add("suspect");
      if (view.corrections.some((c) => c.position === i)) span.classList.add("corrected");
      span.addEventListener("click", () => this.select(i));
      container.appendChild(span);
    });
  }

  private renderCorrections(view: SessionView) {
    const container = this.query<HTMLElement>(".corrections");
    container.innerHTML = "";
    if (view.corrections.length === 0) {
      container.appendChild(el("p", "empty", "no corrections applied"));
      return;
    }
    for (const c of view.corrections) {
      const row = el("div", "correction", `@${c.position} ${c.kind} +${c.delta} `);
      const drop = el("button", "", "remove");
      drop.addEventListener("click", async () => {
        await this.session!.remove(c.position);
        this.selected = null;
        this.renderSession();
        this.query<HTMLElement>(".candidates").innerHTML = "";
      });
      row.appendChild(drop);
      container.appendChild(row);
    }
  }

  async select(position: number) {
    if (!this.session) return;
    this.selected = position;
    const result = await this.client.suggest(this.session.id, position);
    this.renderCandidates(result.candidates, `position ${position}`, position);
  }

  async autoSuggest() {
    if (!this.session) return;
    const result = await this.client.autoSuggest(this.session.id);
    if (!result.candidates.length) {
      this.renderCandidates([], "message reads clean", null);
      return;
    }
    this.selected = null;
    this.renderCandidates(result.candidates, `suspect near ${result.suspect}`, null);
  }

  private renderCandidates(candidates: Candidate[], label: string, position: number | null) {
    const container = this.query<HTMLElement>(".candidates");
    container.innerHTML = "";
    container.appendChild(el("h3", "", label));
    for (const candidate of candidates.slice(0, 12)) {
      const pos = candidate.position ?? position;
      if (pos === null) continue;
      const row = el("div", "candidate");
      row.appendChild(el("code", "preview", candidate.preview));
      row.appendChild(
        el("span", "meta", `@${pos} ${candidate.kind} +${candidate.delta} (${candidate.score.toFixed(2)})`),
      );
      const apply = el("button", "", "apply");
      apply.addEventListener("click", async () => {
        await this.session!.apply({
          position: pos,
          kind: candidate.kind as "keystream" | "combine",
          delta: candidate.delta,
        });
        this.renderSession();
        container.innerHTML = "";
      });
      row.appendChild(apply);
      container.appendChild(row);
    }
  }

  async undo() {
    if (!this.session) return;
    await this.session.undo();
    this.renderSession();
  }

  async save() {
    if (!this.session) return;
    const doc = await this.session.save();
    const blob = new Blob([JSON.stringify(doc, null, 2)], { type: "application/json" });
    const link = el("a");
    link.href = URL.createObjectURL(blob);
    link.download = `session-${this.session.id}.json`;
    link.click();
    URL.revokeObjectURL(link.href);
  }
}
