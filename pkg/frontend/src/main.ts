import { ApiClient } from "./api.js";
import { RecoveryPanel } from "./recovery.js";
import { TabulaPanel } from "./tabula.js";

function activate(tab: string) {
  document.querySelectorAll<HTMLElement>("[data-panel]").forEach((panel) => {
    panel.hidden = panel.dataset.panel !== tab;
  });
  document.querySelectorAll<HTMLElement>("nav button").forEach((button) => {
    button.classList.toggle("active", button.dataset.tab === tab);
  });
}

function init() {
  const client = new ApiClient();
  new RecoveryPanel(client, document.querySelector("[data-panel=recovery]")!);
  new TabulaPanel(client, document.querySelector("[data-panel=tabula]")!);
  document.querySelectorAll<HTMLElement>("nav button").forEach((button) => {
    button.addEventListener("click", () => activate(button.dataset.tab!));
  });
  activate("recovery");
}

if (document.readyState === "loading") {
  document.addEventListener("DOMContentLoaded", init);
} else {
  init();
}
