/** Session state machine. Optimistic updates are forbidden: the held
 * view is always the most recent server response, and undo works by
 * issuing the inverse server call and rendering what comes back. */

import { ApiClient, Correction, SessionView } from "./api.js";

type UndoEntry =
  | { op: "remove"; position: number }
  | { op: "reapply"; correction: Correction };

export class WorkbenchSession {
  private view_: SessionView;
  private undoStack: UndoEntry[] = [];

  constructor(private client: ApiClient, view: SessionView) {
    this.view_ = view;
  }

  static async create(
    client: ApiClient,
    body: Parameters<ApiClient["createSession"]>[0],
  ): Promise<WorkbenchSession> {
    return new WorkbenchSession(client, await client.createSession(body));
  }

  get view(): SessionView {
    return this.view_;
  }

  get id(): string {
    return this.view_.id;
  }

  async refresh(): Promise<SessionView> {
    this.view_ = await this.client.getSession(this.id);
    return this.view_;
  }

  async apply(correction: Correction): Promise<SessionView> {
    this.view_ = await this.client.addCorrection(this.id, correction);
    this.undoStack.push({ op: "remove", position: correction.position });
    return this.view_;
  }

  async remove(position: number): Promise<SessionView> {
    const existing = this.view_.corrections.find((c) => c.position === position);
    this.view_ = await this.client.removeCorrection(this.id, position);
    if (existing) this.undoStack.push({ op: "reapply", correction: existing });
    return this.view_;
  }

  get canUndo(): boolean {
    return this.undoStack.length > 0;
  }

  async undo(): Promise<SessionView> {
    const entry = this.undoStack.pop();
    if (!entry) return this.view_;
    if (entry.op === "remove") {
      this.view_ = await this.client.removeCorrection(this.id, entry.position);
    } else {
      this.view_ = await this.client.addCorrection(this.id, entry.correction);
    }
    return this.view_;
  }

  async save(path?: string) {
    return this.client.saveSession(this.id, path);
  }

  /** Rebuild a session from a saved document: fresh server session over
   * the same ciphertext, then the saved corrections re-applied in
   * order. The result must render identically to what was saved. */
  static async reload(
    client: ApiClient,
    doc: {
      scheme: string;
      ciphertext: string;
      masked_seed_len?: number;
      corrections: Correction[];
    },
    keySource: { keyfile?: string; keys?: Record<string, string | number> },
  ): Promise<WorkbenchSession> {
    let view = await client.createSession({
      scheme: doc.scheme,
      ciphertext: doc.ciphertext,
      masked_seed_len: doc.masked_seed_len,
      ...keySource,
    });
    for (const correction of doc.corrections) {
      view = await client.addCorrection(view.id, correction);
    }
    return new WorkbenchSession(client, view);
  }
}
