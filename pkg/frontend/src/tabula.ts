/** Table rendering and walk animation. The grid always comes from the
 * server; the animation replays the stop list the trace endpoint
 * returned, cell by cell. */

import { ApiClient, TabulaGrid, TraceResponse } from "./api.js";
import { Cell, expandTrace, finalHighlight } from "./trace.js";

export class TabulaPanel {
  private grid: TabulaGrid | null = null;
  private timer: number | null = null;

  constructor(private client: ApiClient, private root: HTMLElement) {
    this.root.innerHTML = `
      <form class="trace-form">
        <label>letters <input name="inputs" value="HCAR" spellcheck="false"></label>
        <label>entry
          <select name="entry"><option>top</option><option>left</option></select>
        </label>
        <label>top header <input name="top" placeholder="key:WORD or 26 letters"></label>
        <label>left header <input name="left" placeholder="identity"></label>
        <label>bottom/right <input name="bottom_right" placeholder="identity"></label>
        <button type="submit">walk</button>
        <span class="result" aria-live="polite"></span>
      </form>
      <div class="tabula-grid"></div>`;
    this.root.querySelector("form")!.addEventListener("submit", (event) => {
      event.preventDefault();
      this.walk();
    });
    this.loadGrid({});
  }

  headerValue(name: string): string | undefined {
    const input = this.root.querySelector<HTMLInputElement>(`[name=${name}]`);
    return input && input.value.trim() ? input.value.trim() : undefined;
  }

  async loadGrid(params: { top?: string; left?: string; bottom_right?: string }) {
    this.grid = await this.client.tabula(params);
    this.renderGrid();
  }

  private cellId(row: number, col: number, edge?: string | null): string {
    if (row >= 0 && col >= 0) return `cell-${row}-${col}`;
    if (row < 0 && col >= 0) return `${edge === "bottom" ? "bottom" : "top"}-${col}`;
    return `${edge === "right" ? "right" : "left"}-${row}`;
  }

  private renderGrid() {
    if (!this.grid) return;
    const container = this.root.querySelector<HTMLElement>(".tabula-grid")!;
    const table = document.createElement("table");
    const top = document.createElement("tr");
    top.appendChild(document.createElement("th"));
    this.grid.top.forEach((letter, col) => {
      const th = document.createElement("th");
      th.id = `top-${col}`;
      th.textContent = letter;
      top.appendChild(th);
    });
    top.appendChild(document.createElement("th"));
    table.appendChild(top);
    this.grid.grid.forEach((letters, row) => {
      const tr = document.createElement("tr");
      const left = document.createElement("th");
      left.id = `left-${row}`;
      left.textContent = this.grid!.left[row];
      tr.appendChild(left);
      letters.forEach((letter, col) => {
        const td = document.createElement("td");
        td.id = `cell-${row}-${col}`;
        td.textContent = letter;
        tr.appendChild(td);
      });
      const right = document.createElement("th");
      right.id = `right-${row}`;
      right.textContent = this.grid!.bottom_right[row];
      tr.appendChild(right);
      table.appendChild(tr);
    });
    const bottom = document.createElement("tr");
    bottom.appendChild(document.createElement("th"));
    this.grid.bottom_right.forEach((letter, col) => {
      const th = document.createElement("th");
      th.id = `bottom-${col}`;
      th.textContent = letter;
      bottom.appendChild(th);
    });
    bottom.appendChild(document.createElement("th"));
    table.appendChild(bottom);
    container.innerHTML = "";
    container.appendChild(table);
  }

  private clearHighlights() {
    this.root
      .querySelectorAll(".walk, .walk-stop, .walk-final")
      .forEach((node) => node.classList.remove("walk", "walk-stop", "walk-final"));
  }

  async walk() {
    const inputs = this.headerValue("inputs") ?? "";
    const entry = this.root.querySelector<HTMLSelectElement>("[name=entry]")!.value;
    const params = {
      top: this.headerValue("top"),
      left: this.headerValue("left"),
      bottom_right: this.headerValue("bottom_right"),
    };
    await this.loadGrid(params);
    const trace = await this.client.trace({ op: "serpentine", inputs, entry, ...params });
    this.animate(trace);
  }

  animate(trace: TraceResponse, stepMs = 45) {
    if (this.timer !== null) window.clearInterval(this.timer);
    this.clearHighlights();
    const cells = expandTrace(trace.stops);
    const final = finalHighlight(trace.stops);
    let i = 0;
    this.timer = window.setInterval(() => {
      if (i >= cells.length) {
        window.clearInterval(this.timer!);
        this.timer = null;
        const last = trace.stops[trace.stops.length - 1];
        const id = this.cellId(last.row, last.col, last.edge);
        this.root.querySelector(`#${id}`)?.classList.add("walk-final");
        this.root.querySelector<HTMLElement>(".result")!.textContent =
          `result: ${final.letter}`;
        return;
      }
      const cell: Cell = cells[i++];
      const id = this.cellId(cell.row, cell.col, cell.edge);
      this.root
        .querySelector(`#${id}`)
        ?.classList.add(cell.kind === "scan" ? "walk" : "walk-stop");
    }, stepMs);
  }
}
